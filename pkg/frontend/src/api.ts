/** Typed client for the recommendation service JSON endpoints. */

export interface CallSummary {
  id: string;
  title: string;
}

export interface ResearcherSummary {
  id: string;
  name: string;
}

export interface Listing<T> {
  items: T[];
  total: number;
  next_offset: number | null;
}

export interface TeamMetrics {
  redundancy: number;
  set_size_norm: number;
  coverage: number;
  k_robustness_norm: number;
  k_robust: number;
}

export interface TeamPayload {
  members: ResearcherSummary[];
  goodness: number;
  metrics: TeamMetrics;
}

export interface SlatePayload {
  call: CallSummary;
  teams: TeamPayload[];
}

export type Mode = "researcher" | "call" | "interest";
export type Method = "M0" | "M1" | "M2" | "M3";

export interface RecommendRequest {
  mode: Mode;
  subject: string;
  method: Method;
  k: number;
}

export interface RecommendationResponse {
  recommendation_id: string;
  method: Method;
  mode: Mode;
  slates: SlatePayload[];
  generated_at: string;
}

export interface FeedbackSubmission {
  recommendation_id: string;
  relevance: number;
  usefulness: number;
  comment: string;
}

/** Service-reported failure: carries the HTTP status and the error code. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "UNKNOWN";
  let message = response.statusText;
  try {
    const body = (await response.json()) as { error?: string; message?: string };
    if (body.error) code = body.error;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, code, message);
}

export class TeamRecApi {
  constructor(private readonly base: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(`${this.base}${path}`);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  async listCalls(limit = 500): Promise<CallSummary[]> {
    const listing = await this.getJson<Listing<CallSummary>>(`/calls?limit=${limit}`);
    return listing.items;
  }

  async listResearchers(limit = 500): Promise<ResearcherSummary[]> {
    const listing = await this.getJson<Listing<ResearcherSummary>>(
      `/researchers?limit=${limit}`,
    );
    return listing.items;
  }

  async recommend(
    request: RecommendRequest,
    signal?: AbortSignal,
  ): Promise<RecommendationResponse> {
    const response = await fetch(`${this.base}/recommend`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
      signal,
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as RecommendationResponse;
  }

  async submitFeedback(feedback: FeedbackSubmission): Promise<void> {
    const response = await fetch(`${this.base}/feedback`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(feedback),
    });
    if (!response.ok) throw await parseError(response);
  }
}
