import { ApiClient } from "./api.js";
import { renderCardGrid } from "./cards.js";
import { buildChartModel, renderChart } from "./chart.js";
import { ConsoleState, DEFAULT_K, K_CHOICES, initialState, previewUrlFor } from "./state.js";
import type { AssumedLabel, QueryResponse } from "./types.js";

export interface QueryApi {
  stats: ApiClient["stats"];
  query: ApiClient["query"];
  archivedImage: ApiClient["archivedImage"];
  imageUrl: ApiClient["imageUrl"];
}

export interface ConsoleHandle {
  state: ConsoleState;
  setK(k: number): void;
  setAssumedLabel(label: AssumedLabel): void;
  setQueryImage(blob: Blob, name: string): void;
  pickFromIndex(id: number): Promise<void>;
  submit(): Promise<void>;
  toggleSeries(key: string): void;
  render(): void;
}

const SHELL = `
  <header class="toolbar">
    <h1>thir console</h1>
    <span class="stats" data-role="stats"></span>
  </header>
  <section class="controls">
    <label class="control">query image
      <input type="file" accept="image/png,image/jpeg" data-role="file">
    </label>
    <label class="control">or archived id
      <span class="picker">
        <input type="number" min="0" value="0" data-role="pick-id">
        <button type="button" data-role="pick">use</button>
      </span>
    </label>
    <label class="control">top K
      <select data-role="k"></select>
    </label>
    <label class="control">assumed label
      <select data-role="assumed">
        <option value="">none</option>
        <option value="benign">benign</option>
        <option value="malignant">malignant</option>
      </select>
    </label>
    <button type="button" class="primary" data-role="submit">retrieve</button>
  </section>
  <div class="banner" data-role="error" hidden></div>
  <section class="query-preview" data-role="preview" hidden>
    <h2>query</h2>
    <img alt="query image" data-role="preview-img">
  </section>
  <section>
    <h2>results</h2>
    <div class="grid" data-role="cards"></div>
  </section>
  <section>
    <h2>Betti curves</h2>
    <div class="legend" data-role="legend"></div>
    <div class="chart-box" data-role="chart"></div>
  </section>
`;

function roleEl<T extends HTMLElement>(root: HTMLElement, role: string): T {
  const el = root.querySelector(`[data-role="${role}"]`);
  if (!el) throw new Error(`missing console element: ${role}`);
  return el as T;
}

export function mountConsole(root: HTMLElement, api: QueryApi): ConsoleHandle {
  root.innerHTML = SHELL;
  const state = initialState();

  const kSelect = roleEl<HTMLSelectElement>(root, "k");
  for (const k of K_CHOICES) {
    const opt = document.createElement("option");
    opt.value = String(k);
    opt.textContent = String(k);
    if (k === DEFAULT_K) opt.selected = true;
    kSelect.appendChild(opt);
  }

  const fileInput = roleEl<HTMLInputElement>(root, "file");
  const pickId = roleEl<HTMLInputElement>(root, "pick-id");
  const pickButton = roleEl<HTMLButtonElement>(root, "pick");
  const assumedSelect = roleEl<HTMLSelectElement>(root, "assumed");
  const submitButton = roleEl<HTMLButtonElement>(root, "submit");
  const errorBanner = roleEl<HTMLDivElement>(root, "error");
  const preview = roleEl<HTMLElement>(root, "preview");
  const previewImg = roleEl<HTMLImageElement>(root, "preview-img");
  const cardsBox = roleEl<HTMLDivElement>(root, "cards");
  const legendBox = roleEl<HTMLDivElement>(root, "legend");
  const chartBox = roleEl<HTMLDivElement>(root, "chart");
  const statsBox = roleEl<HTMLSpanElement>(root, "stats");

  function renderLegend(response: QueryResponse): void {
    legendBox.replaceChildren();
    for (const series of buildChartModel(response, state.hiddenSeries).series) {
      const btn = document.createElement("button");
      btn.type = "button";
      btn.className = series.hidden ? "legend-item hidden" : "legend-item";
      btn.dataset.series = series.key;
      const swatch = document.createElement("span");
      swatch.className = "swatch";
      swatch.style.background = series.color;
      btn.appendChild(swatch);
      btn.appendChild(document.createTextNode(series.name));
      btn.addEventListener("click", () => handle.toggleSeries(series.key));
      legendBox.appendChild(btn);
    }
  }

  function render(): void {
    errorBanner.hidden = state.error === null;
    errorBanner.textContent = state.error ?? "";
    submitButton.disabled = state.pending || state.queryImage === null;
    submitButton.textContent = state.pending ? "retrieving…" : "retrieve";

    if (state.queryImage && state.queryImage.previewUrl) {
      preview.hidden = false;
      previewImg.src = state.queryImage.previewUrl;
    } else {
      preview.hidden = true;
    }

    if (state.response) {
      renderCardGrid(cardsBox, state.response.results, state.assumedLabel);
      renderLegend(state.response);
      chartBox.replaceChildren(renderChart(buildChartModel(state.response, state.hiddenSeries)));
    } else {
      cardsBox.replaceChildren();
      legendBox.replaceChildren();
      chartBox.replaceChildren();
    }
  }

  const handle: ConsoleHandle = {
    state,
    render,

    setK(k: number): void {
      state.k = k;
      kSelect.value = String(k);
    },

    setAssumedLabel(label: AssumedLabel): void {
      state.assumedLabel = label;
      render(); // outline refresh only, no request
    },

    setQueryImage(blob: Blob, name: string): void {
      state.queryImage = { blob, name, previewUrl: previewUrlFor(blob) };
      state.error = null;
      render();
    },

    async pickFromIndex(id: number): Promise<void> {
      try {
        const blob = await api.archivedImage(id);
        handle.setQueryImage(blob, `entry-${id}.png`);
      } catch (err) {
        state.error = `could not fetch archived image ${id}: ${(err as Error).message}`;
        render();
      }
    },

    async submit(): Promise<void> {
      if (!state.queryImage) return;
      const seq = ++state.requestSeq;
      state.pending = true;
      state.error = null;
      render();
      try {
        const response = await api.query(state.queryImage.blob, state.queryImage.name, state.k);
        if (seq !== state.requestSeq) return; // superseded by a newer submit
        state.response = response;
        state.hiddenSeries = new Set();
      } catch (err) {
        if (seq !== state.requestSeq) return;
        // keep the previous results on screen; surface the failure inline
        state.error = (err as Error).message;
      } finally {
        if (seq === state.requestSeq) {
          state.pending = false;
          render();
        }
      }
    },

    toggleSeries(key: string): void {
      if (state.hiddenSeries.has(key)) state.hiddenSeries.delete(key);
      else state.hiddenSeries.add(key);
      render(); // chart-only refresh, no request
    },
  };

  fileInput.addEventListener("change", () => {
    const file = fileInput.files?.[0];
    if (file) handle.setQueryImage(file, file.name);
  });
  pickButton.addEventListener("click", () => {
    void handle.pickFromIndex(Number(pickId.value));
  });
  kSelect.addEventListener("change", () => handle.setK(Number(kSelect.value)));
  assumedSelect.addEventListener("change", () => {
    handle.setAssumedLabel((assumedSelect.value || null) as AssumedLabel);
  });
  submitButton.addEventListener("click", () => void handle.submit());

  void api
    .stats()
    .then((s) => {
      statsBox.textContent = `${s.entries} indexed images · R=${s.resolution} · ${s.dim} features`;
    })
    .catch(() => {
      statsBox.textContent = "service stats unavailable";
    });

  render();
  return handle;
}

export function bootstrap(): void {
  const root = document.getElementById("app");
  if (root) mountConsole(root, new ApiClient(""));
}
