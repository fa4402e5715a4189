import { readFileSync } from "node:fs";
import { createServer, IncomingMessage, Server, ServerResponse } from "node:http";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

// compiled location is dist-test/tests/, fixtures stay in tests/fixtures/
const here = dirname(fileURLToPath(import.meta.url));
const fixturesDir = join(here, "..", "..", "tests", "fixtures");
const snapshotsDir = join(here, "..", "..", "tests", "snapshots");

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(fixturesDir, name), "utf8")) as T;
}

export function loadSnapshot(name: string): string {
  return readFileSync(join(snapshotsDir, name), "utf8");
}

export interface RecordedRequest {
  method: string;
  path: string;
  body: unknown;
}

export interface ScriptedResponse {
  status?: number;
  body: unknown;
}

export interface StubServer {
  url: string;
  requests: RecordedRequest[];
  close(): Promise<void>;
}

/** One-shot scripted HTTP server: responses are served in order and every
 *  request is recorded for call-sequence assertions. */
export async function startStubServer(script: ScriptedResponse[]): Promise<StubServer> {
  const requests: RecordedRequest[] = [];
  const server: Server = createServer((req: IncomingMessage, res: ServerResponse) => {
    const chunks: Buffer[] = [];
    req.on("data", (c: Buffer) => chunks.push(c));
    req.on("end", () => {
      const raw = Buffer.concat(chunks).toString("utf8");
      requests.push({
        method: req.method ?? "",
        path: req.url ?? "",
        body: raw ? JSON.parse(raw) : null,
      });
      const idx = Math.min(requests.length - 1, script.length - 1);
      const scripted = script[idx] ?? { status: 500, body: {} };
      const payload = JSON.stringify(scripted.body);
      res.writeHead(scripted.status ?? 200, {
        "Content-Type": "application/json",
        "Content-Length": Buffer.byteLength(payload),
      });
      res.end(payload);
    });
  });
  await new Promise<void>((resolve) => server.listen(0, "127.0.0.1", resolve));
  const address = server.address();
  if (address === null || typeof address === "string") {
    throw new Error("stub server failed to bind");
  }
  return {
    url: `http://127.0.0.1:${address.port}`,
    requests,
    close: () =>
      new Promise<void>((resolve, reject) =>
        server.close((err) => (err ? reject(err) : resolve()))),
  };
}
