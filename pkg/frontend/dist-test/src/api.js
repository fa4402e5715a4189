import { ApiRequestError, } from "./types.js";
/** Thin JSON client over the gateway; base URL and fetch are injectable
 *  so tests can point it at a scripted stub server. */
export class ApiClient {
    baseUrl;
    fetchImpl;
    constructor(baseUrl = "", fetchImpl) {
        this.baseUrl = baseUrl.replace(/\/$/, "");
        this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
    }
    async request(path, init) {
        const res = await this.fetchImpl(this.baseUrl + path, init);
        const body = await res.json().catch(() => ({}));
        if (!res.ok) {
            const code = typeof body?.code === "string" ? body.code : "http_error";
            const message = typeof body?.message === "string" ? body.message : `HTTP ${res.status}`;
            throw new ApiRequestError(res.status, code, message);
        }
        return body;
    }
    health() {
        return this.request("/health");
    }
    getHei(seqn) {
        return this.request(`/users/${seqn}/hei`);
    }
    getRecommendations(seqn, k = 5) {
        return this.request(`/users/${seqn}/recommendations?k=${k}`);
    }
    whatIf(req) {
        return this.request("/whatif", {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(req),
        });
    }
    searchFoods(q, k = 10) {
        return this.request(`/foods/search?q=${encodeURIComponent(q)}&k=${k}`);
    }
}
