import type { AssumedLabel, QueryResponse } from "./types.js";

export interface QueryImage {
  blob: Blob;
  name: string;
  previewUrl: string;
}

export interface ConsoleState {
  k: number; // 1..10
  assumedLabel: AssumedLabel;
  queryImage: QueryImage | null;
  response: QueryResponse | null;
  hiddenSeries: Set<string>;
  error: string | null;
  pending: boolean;
  requestSeq: number; // responses from superseded submits are discarded
}

export const K_CHOICES = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];
export const DEFAULT_K = 5;

export function initialState(): ConsoleState {
  return {
    k: DEFAULT_K,
    assumedLabel: null,
    queryImage: null,
    response: null,
    hiddenSeries: new Set(),
    error: null,
    pending: false,
    requestSeq: 0,
  };
}

export function previewUrlFor(blob: Blob): string {
  // jsdom has no createObjectURL; a missing preview only skips the thumbnail
  try {
    return URL.createObjectURL(blob);
  } catch {
    return "";
  }
}
