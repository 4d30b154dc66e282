import type {
  CountryResponse,
  PeriodsResponse,
  ProductSpaceResponse,
  RankingsResponse,
  WhatIfRequest,
  WhatIfResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = "http_error";
  let message = `request failed with status ${response.status}`;
  try {
    const body = await response.json();
    if (body && typeof body === "object" && "error" in body) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  return new ApiError(code, message, response.status);
}

/** Thin typed client for the snapshot service; all numbers displayed by
 * the UI come from these responses, never from local computation. */
export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchFn: typeof fetch;

  constructor(baseUrl: string, fetchFn?: typeof fetch) {
    this.baseUrl = baseUrl;
    // Wrap the global so the call site never loses its `this` binding.
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  periods(): Promise<PeriodsResponse> {
    return this.get("/periods");
  }

  rankings(period: string, metric = "eci"): Promise<RankingsResponse> {
    const q = new URLSearchParams({ period, metric });
    return this.get(`/rankings?${q}`);
  }

  productSpace(period: string): Promise<ProductSpaceResponse> {
    const q = new URLSearchParams({ period });
    return this.get(`/productspace?${q}`);
  }

  country(period: string, code: string): Promise<CountryResponse> {
    const q = new URLSearchParams({ period });
    return this.get(`/country/${encodeURIComponent(code)}?${q}`);
  }

  async whatIf(body: WhatIfRequest): Promise<WhatIfResponse> {
    const response = await this.fetchFn(`${this.baseUrl}/whatif`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as WhatIfResponse;
  }
}
