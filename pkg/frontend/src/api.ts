import type { QueryResponse, StatsResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function errorFrom(resp: Response): Promise<ApiError> {
  // service errors are JSON {error, message}; fall back to the status line
  try {
    const body = (await resp.json()) as { error?: string; message?: string };
    return new ApiError(resp.status, body.message ?? body.error ?? resp.statusText);
  } catch {
    return new ApiError(resp.status, resp.statusText || `HTTP ${resp.status}`);
  }
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  async stats(): Promise<StatsResponse> {
    const resp = await fetch(`${this.baseUrl}/api/stats`);
    if (!resp.ok) throw await errorFrom(resp);
    return (await resp.json()) as StatsResponse;
  }

  async query(image: Blob, filename: string, k: number): Promise<QueryResponse> {
    const form = new FormData();
    form.append("image", image, filename);
    const resp = await fetch(`${this.baseUrl}/api/query?k=${k}`, {
      method: "POST",
      body: form,
    });
    if (!resp.ok) throw await errorFrom(resp);
    return (await resp.json()) as QueryResponse;
  }

  async archivedImage(id: number): Promise<Blob> {
    const resp = await fetch(this.imageUrl(id));
    if (!resp.ok) throw await errorFrom(resp);
    return resp.blob();
  }

  imageUrl(id: number): string {
    return `${this.baseUrl}/api/images/${id}`;
  }
}
