/** Typed client for the annotation service HTTP API.
 *
 * The UI mutates server state exclusively through these five endpoints.
 */

export interface BlockSummary {
  id: number;
  status: string;
  size: number;
  accuracy: number | null;
}

export interface BlockRow {
  key: string;
  arabish: string;
  tra: string;
  auto: string[] | null;
  final: string[] | null;
  ita: string;
  lem: string;
  pos: string;
  var: string;
  age: string;
  gen: string;
}

export interface BlockPayload {
  summary: BlockSummary;
  rows: BlockRow[];
}

export interface MetricsBlock {
  id: number;
  status: string;
  accuracy: number | null;
}

export interface GrowthPoint {
  version: number;
  pairs: number;
}

export interface Metrics {
  blocks: MetricsBlock[];
  training_growth: GrowthPoint[];
  cv: unknown | null;
}

export interface RetrainResult {
  version: number;
  training_pairs: number;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  listBlocks(): Promise<BlockSummary[]> {
    return this.request<BlockSummary[]>("/blocks");
  }

  getBlock(id: number): Promise<BlockPayload> {
    return this.request<BlockPayload>(`/blocks/${id}`);
  }

  postCorrections(id: number, corrections: Record<string, string[]>): Promise<BlockSummary> {
    return this.request<BlockSummary>(`/blocks/${id}/corrections`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ corrections }),
    });
  }

  retrain(): Promise<RetrainResult> {
    return this.request<RetrainResult>("/retrain", { method: "POST" });
  }

  getMetrics(): Promise<Metrics> {
    return this.request<Metrics>("/metrics");
  }
}
