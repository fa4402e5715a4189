// Wire types mirroring the gateway's JSON payloads. The client renders
// these verbatim; it never derives a score on its own.
export class SchemaMismatchError extends Error {
    constructor(message) {
        super(message);
        this.name = "SchemaMismatchError";
    }
}
export class ApiRequestError extends Error {
    status;
    code;
    constructor(status, code, message) {
        super(message);
        this.name = "ApiRequestError";
        this.status = status;
        this.code = code;
    }
}
