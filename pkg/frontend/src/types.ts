// Wire types mirroring the gateway's JSON payloads. The client renders
// these verbatim; it never derives a score on its own.

export interface ComponentScore {
  value: number | null;
  points: number;
  max_points: number;
}

export interface HeiScore {
  total: number;
  components: Record<string, ComponentScore>;
}

export interface PlanStep {
  food_code: number;
  description: string;
  mode: string;
  portion: number;
  delta_h: number;
  component_deltas: Record<string, number>;
}

export interface PlanPayload {
  steps: PlanStep[];
  baseline_total: number;
  final_total: number;
  total_improvement: number;
  final_intake: Record<string, number>;
}

export interface Recommendation {
  food_code: number;
  portion: number;
  rationale: string;
  cited_components: string[];
  anticipated_delta: number;
}

export interface Alternative {
  food_code: number;
  description: string;
  similarity: number;
  delta_h: number;
  utility: number;
  best_portion: number;
  portion_deltas: Record<string, number>;
}

export interface RecommendationPayload {
  seqn: number;
  query_text: string;
  deficit_components: string[];
  baseline_hei: HeiScore;
  plan: PlanPayload;
  recommendations: Recommendation[];
  explainer: "llm" | "fallback";
  alternatives: Alternative[];
}

export interface WhatIfRequest {
  seqn?: number;
  profile?: Record<string, number>;
  food_code: number;
  portion: number;
  mode?: "ADD" | "SWAP";
  swap_base?: number;
}

export interface WhatIfResponse {
  before_total: number;
  after_total: number;
  delta_h: number;
  component_deltas: Record<string, number>;
  after_profile: Record<string, number>;
}

export interface FoodSearchHit {
  food_code: number;
  description: string;
  similarity: number;
}

export class SchemaMismatchError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaMismatchError";
  }
}

export class ApiRequestError extends Error {
  readonly status: number;
  readonly code: string;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.name = "ApiRequestError";
    this.status = status;
    this.code = code;
  }
}
