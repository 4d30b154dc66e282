import { ApiClient } from "./api.js";
import { Explorer } from "./app.js";
import type { Overlay } from "./types.js";

const DEFAULT_BASE = "http://127.0.0.1:8000";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? DEFAULT_BASE;
  const api = new ApiClient(base);
  const explorer = new Explorer(api, {
    graph: el("graph"),
    sidebar: el("sidebar"),
    panel: el("panel"),
    status: el("status"),
  });

  const periodSelect = el<HTMLSelectElement>("period");
  const countrySelect = el<HTMLSelectElement>("country");
  const overlaySelect = el<HTMLSelectElement>("overlay");
  const undoButton = el<HTMLButtonElement>("undo");

  const periods = await api.periods();
  for (const p of periods.periods) {
    const opt = document.createElement("option");
    opt.value = p.id;
    opt.textContent = p.id;
    periodSelect.appendChild(opt);
  }

  async function fillCountries(period: string): Promise<string> {
    const rankings = await api.rankings(period, "eci");
    countrySelect.textContent = "";
    for (const entry of rankings.entries) {
      const opt = document.createElement("option");
      opt.value = entry.country;
      opt.textContent = entry.country;
      countrySelect.appendChild(opt);
    }
    return rankings.entries[0]?.country ?? "";
  }

  async function reload(): Promise<void> {
    const period = periodSelect.value;
    const country = countrySelect.value;
    if (period && country) await explorer.loadView(period, country);
  }

  periodSelect.addEventListener("change", async () => {
    countrySelect.value = await fillCountries(periodSelect.value);
    await reload();
  });
  countrySelect.addEventListener("change", reload);
  overlaySelect.addEventListener("change", () => {
    explorer.setOverlay(overlaySelect.value as Overlay);
  });
  undoButton.addEventListener("click", () => void explorer.undo());

  const first = periods.periods[0]?.id ?? "";
  periodSelect.value = first;
  countrySelect.value = await fillCountries(first);
  await reload();
}

void boot();
