import { readFileSync } from "node:fs";
import { createServer } from "node:http";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
// compiled location is dist-test/tests/, fixtures stay in tests/fixtures/
const here = dirname(fileURLToPath(import.meta.url));
const fixturesDir = join(here, "..", "..", "tests", "fixtures");
const snapshotsDir = join(here, "..", "..", "tests", "snapshots");
export function loadFixture(name) {
    return JSON.parse(readFileSync(join(fixturesDir, name), "utf8"));
}
export function loadSnapshot(name) {
    return readFileSync(join(snapshotsDir, name), "utf8");
}
/** One-shot scripted HTTP server: responses are served in order and every
 *  request is recorded for call-sequence assertions. */
export async function startStubServer(script) {
    const requests = [];
    const server = createServer((req, res) => {
        const chunks = [];
        req.on("data", (c) => chunks.push(c));
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
    await new Promise((resolve) => server.listen(0, "127.0.0.1", resolve));
    const address = server.address();
    if (address === null || typeof address === "string") {
        throw new Error("stub server failed to bind");
    }
    return {
        url: `http://127.0.0.1:${address.port}`,
        requests,
        close: () => new Promise((resolve, reject) => server.close((err) => (err ? reject(err) : resolve()))),
    };
}
