import type { AssumedLabel, ResultEntry } from "./types.js";

export interface ResultCard {
  id: number;
  label: string;
  magnification: number;
  distance: number;
  imageUrl: string;
  // true when the user's assumed query label disagrees -> red outline
  mismatch: boolean;
}

/** View models for the result grid, in the service's distance-ascending
 * order. The console never recomputes or reorders distances. */
export function buildCards(results: ResultEntry[], assumed: AssumedLabel): ResultCard[] {
  return results.map((r) => ({
    id: r.id,
    label: r.label,
    magnification: r.magnification,
    distance: r.distance,
    imageUrl: r.image_url,
    mismatch: assumed !== null && r.label !== assumed,
  }));
}

export function formatDistance(distance: number): string {
  return distance.toFixed(3);
}

export function renderCard(card: ResultCard): HTMLElement {
  const el = document.createElement("article");
  el.className = card.mismatch ? "card mismatch" : "card";
  el.dataset.entryId = String(card.id);
  el.dataset.distance = String(card.distance);
  el.dataset.label = card.label;

  const img = document.createElement("img");
  img.src = card.imageUrl;
  img.alt = `entry ${card.id} (${card.label})`;
  el.appendChild(img);

  const meta = document.createElement("div");
  meta.className = "card-meta";
  const badge = document.createElement("span");
  badge.className = `badge badge-${card.label}`;
  badge.textContent = card.label;
  meta.appendChild(badge);
  const detail = document.createElement("span");
  detail.className = "card-detail";
  const mag = card.magnification > 0 ? ` · ${card.magnification}x` : "";
  detail.textContent = `#${card.id}${mag} · d=${formatDistance(card.distance)}`;
  meta.appendChild(detail);
  el.appendChild(meta);
  return el;
}

export function renderCardGrid(
  container: HTMLElement,
  results: ResultEntry[],
  assumed: AssumedLabel,
): void {
  container.replaceChildren();
  for (const card of buildCards(results, assumed)) {
    container.appendChild(renderCard(card));
  }
}
