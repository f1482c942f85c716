// JSON contract of the retrieval service (see /api endpoints).

export interface ResultEntry {
  id: number;
  label: string; // "benign" | "malignant" | "unknown"
  magnification: number; // 0 when unspecified
  distance: number;
  image_url: string;
}

export interface QueryCurves {
  values: number[]; // 3R loop counts, channel blocks R|G|B
  samples: { r: number[]; g: number[]; b: number[] };
}

export interface QueryResponse {
  k: number;
  results: ResultEntry[];
  query_curves: QueryCurves;
  result_curves: number[][]; // one 3R vector per result, same order
}

export interface StatsResponse {
  entries: number;
  resolution: number;
  dim: number;
  labels: Record<string, number>;
  magnifications: Record<string, number>;
}

export type AssumedLabel = "benign" | "malignant" | null;
