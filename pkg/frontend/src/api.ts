import {
  ApiRequestError,
  FoodSearchHit,
  HeiScore,
  RecommendationPayload,
  WhatIfRequest,
  WhatIfResponse,
} from "./types.js";

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin JSON client over the gateway; base URL and fetch are injectable
 *  so tests can point it at a scripted stub server. */
export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchImpl(this.baseUrl + path, init);
    const body = await res.json().catch(() => ({}));
    if (!res.ok) {
      const code = typeof body?.code === "string" ? body.code : "http_error";
      const message = typeof body?.message === "string" ? body.message : `HTTP ${res.status}`;
      throw new ApiRequestError(res.status, code, message);
    }
    return body as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  getHei(seqn: number): Promise<HeiScore & { seqn: number }> {
    return this.request(`/users/${seqn}/hei`);
  }

  getRecommendations(seqn: number, k = 5): Promise<RecommendationPayload> {
    return this.request(`/users/${seqn}/recommendations?k=${k}`);
  }

  whatIf(req: WhatIfRequest): Promise<WhatIfResponse> {
    return this.request("/whatif", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }

  searchFoods(q: string, k = 10): Promise<{ results: FoodSearchHit[] }> {
    return this.request(`/foods/search?q=${encodeURIComponent(q)}&k=${k}`);
  }
}
