import assert from "node:assert/strict";
import { test } from "node:test";

import { ApiClient } from "../src/api.js";
import { WhatIfSandbox } from "../src/sandbox.js";
import { WhatIfResponse } from "../src/types.js";
import { startStubServer } from "./helpers.js";

const SEQN = 16;
const BASELINE = 50.0;

const PROFILE_AFTER_A = { energy_kcal: 2080, f_wholegrain_oz: 1.2 };
const PROFILE_AFTER_AB = { energy_kcal: 2130, f_wholegrain_oz: 1.2, f_totfruit_cup: 0.5 };

function whatIfResponse(before: number, after: number,
                        profile: Record<string, number>): WhatIfResponse {
  return {
    before_total: before,
    after_total: after,
    delta_h: after - before,
    component_deltas: { whole_grains: after - before },
    after_profile: profile,
  };
}

// Scripted gateway: apply A, apply B (compounded), replay A (fresh), baseline.
// B previewed on the BASELINE would gain 4.5 points; compounded on A it
// gains only 3.6 -- so a client summing deltas locally would show 61.8,
// while the server's compounded projection is 60.9.
const SCRIPT = [
  { body: whatIfResponse(BASELINE, 57.3, PROFILE_AFTER_A) },   // apply A
  { body: whatIfResponse(57.3, 60.9, PROFILE_AFTER_AB) },      // apply B on A
  { body: whatIfResponse(BASELINE, 57.3, PROFILE_AFTER_A) },   // undo -> replay A
  { body: { seqn: SEQN, total: BASELINE, components: {} } },   // undo -> fresh hei
];

test("two sequential applies display the server's compounded projection", async () => {
  const stub = await startStubServer(SCRIPT);
  try {
    const client = new ApiClient(stub.url);
    const sandbox = new WhatIfSandbox(client, SEQN, BASELINE);

    const first = await sandbox.apply({ food_code: 101, portion: 1.0, mode: "ADD" });
    assert.equal(sandbox.displayedTotal, 57.3);
    assert.equal(sandbox.displayedTotal, first.after_total);

    const second = await sandbox.apply({ food_code: 202, portion: 0.5, mode: "ADD" });
    assert.equal(sandbox.displayedTotal, 60.9);
    assert.equal(sandbox.displayedTotal, second.after_total);

    // not a client-side sum: baseline + deltaA + baseline-preview deltaB
    const naiveSum = BASELINE + 7.3 + 4.5;
    assert.notEqual(sandbox.displayedTotal, naiveSum);

    // call sequence: first request anchored on the seqn, second compounds
    // on the server-returned profile
    assert.equal(stub.requests.length, 2);
    const [reqA, reqB] = stub.requests;
    assert.equal(reqA!.path, "/whatif");
    assert.deepEqual((reqA!.body as Record<string, unknown>)["seqn"], SEQN);
    assert.equal((reqA!.body as Record<string, unknown>)["profile"], undefined);
    assert.deepEqual((reqB!.body as Record<string, unknown>)["profile"], PROFILE_AFTER_A);
    assert.equal((reqB!.body as Record<string, unknown>)["seqn"], undefined);

    // the sandbox invariant: running score equals the last response
    assert.deepEqual(sandbox.lastWhatIf, second);
  } finally {
    await stub.close();
  }
});

test("apply then undo returns to the pre-apply value via fresh responses", async () => {
  const stub = await startStubServer(SCRIPT);
  try {
    const client = new ApiClient(stub.url);
    const sandbox = new WhatIfSandbox(client, SEQN, BASELINE);

    await sandbox.apply({ food_code: 101, portion: 1.0, mode: "ADD" });
    await sandbox.apply({ food_code: 202, portion: 0.5, mode: "ADD" });
    const beforeUndo = stub.requests.length;

    // undo B: the chain [A] is replayed server-side, giving a FRESH 57.3
    const afterUndo = await sandbox.undo();
    assert.equal(afterUndo, 57.3);
    assert.equal(sandbox.displayedTotal, 57.3);
    assert.equal(stub.requests.length, beforeUndo + 1);
    assert.equal(stub.requests[beforeUndo]!.path, "/whatif");
    assert.deepEqual((stub.requests[beforeUndo]!.body as Record<string, unknown>)["seqn"], SEQN);

    // undo A: no modifications left, so the baseline is re-fetched
    const backToBase = await sandbox.undo();
    assert.equal(backToBase, BASELINE);
    assert.equal(stub.requests.length, beforeUndo + 2);
    const last = stub.requests[stub.requests.length - 1]!;
    assert.equal(last.method, "GET");
    assert.equal(last.path, `/users/${SEQN}/hei`);

    // undo with nothing applied is a no-op
    const still = await sandbox.undo();
    assert.equal(still, BASELINE);
    assert.equal(stub.requests.length, beforeUndo + 2);
  } finally {
    await stub.close();
  }
});

test("gateway error codes surface as typed errors and leave state intact", async () => {
  const stub = await startStubServer([
    { status: 422, body: { code: "invalid_portion", message: "portion must be one of [0.5, 1.0, 1.5]" } },
  ]);
  try {
    const client = new ApiClient(stub.url);
    const sandbox = new WhatIfSandbox(client, SEQN, BASELINE);
    await assert.rejects(
      sandbox.apply({ food_code: 101, portion: 2.0 as number, mode: "ADD" }),
      (err: Error & { code?: string }) => err.name === "ApiRequestError"
        && err.code === "invalid_portion",
    );
    assert.equal(sandbox.appliedModifications.length, 0);
    assert.equal(sandbox.displayedTotal, BASELINE);
  } finally {
    await stub.close();
  }
});
