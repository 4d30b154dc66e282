/** Explorer wiring: load a (period, country) view, toggle basket
 * products, switch overlays. All numbers rendered are service values. */

import { ApiClient, ApiError } from "./api.js";
import { makeScale, type ColorScale } from "./color.js";
import {
  recolorScene,
  renderError,
  renderPanel,
  renderRankings,
  renderScene,
} from "./render.js";
import { ViewState } from "./state.js";
import type {
  CountryResponse,
  Overlay,
  ProductSpaceResponse,
  RankingsResponse,
} from "./types.js";
import { WhatIfController } from "./whatif.js";

export interface ExplorerElements {
  graph: HTMLElement;
  sidebar: HTMLElement;
  panel: HTMLElement;
  status: HTMLElement;
}

export class Explorer {
  readonly state = new ViewState();
  readonly whatif: WhatIfController;
  digest = "";
  private space: ProductSpaceResponse | null = null;
  private countryData: CountryResponse | null = null;
  private rankings: RankingsResponse | null = null;
  private scales: { pgi: ColorScale; pci: ColorScale } | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly el: ExplorerElements,
  ) {
    this.whatif = new WhatIfController(api, this.state);
  }

  /** Fetch the product space, portfolio, and rankings for a view and
   * render the scene. On failure the graph area shows a retryable error
   * state instead of a blank canvas. */
  async loadView(period: string, country: string): Promise<void> {
    this.el.status.textContent = `loading ${country} / ${period}...`;
    try {
      const [periods, space, countryData, rankings] = await Promise.all([
        this.api.periods(),
        this.api.productSpace(period),
        this.api.country(period, country),
        this.api.rankings(period, "eci"),
      ]);
      this.digest = periods.content_digest;
      this.space = space;
      this.countryData = countryData;
      this.rankings = rankings;
      this.scales = {
        pgi: makeScale(space.nodes.map((n) => n.pgi)),
        pci: makeScale(space.nodes.map((n) => n.pci), true),
      };
      this.state.setView(
        period,
        country,
        space.nodes.map((n) => n.id),
        countryData.portfolio.map((p) => p.product),
      );
      this.whatif.reset();
      this.renderAll();
      this.el.status.textContent = `snapshot ${this.digest.slice(0, 12)}`;
    } catch (err) {
      const message =
        err instanceof ApiError
          ? `${err.message} [${err.code}]`
          : `could not reach the snapshot service: ${String(err)}`;
      renderError(this.el.graph, message, () => {
        void this.loadView(period, country);
      });
      this.el.status.textContent = "error";
    }
  }

  /** Toggle a product in or out of the hypothetical basket and show the
   * service's what-if result. Stale responses are dropped; failures roll
   * the edit back and surface the error in the panel area. */
  async toggleProduct(product: string): Promise<void> {
    try {
      const update = await this.whatif.toggle(product);
      if (update) {
        renderPanel(this.el.panel, update.result, this.digest);
      }
    } catch (err) {
      const message =
        err instanceof ApiError ? `${err.message} [${err.code}]` : String(err);
      renderError(this.el.panel, `what-if failed: ${message}`, () => {
        void this.toggleProduct(product);
      });
    }
  }

  async undo(): Promise<void> {
    const update = await this.whatif.undo();
    if (update) {
      renderPanel(this.el.panel, update.result, this.digest);
    }
  }

  /** Recolor nodes for the other overlay without refetching anything. */
  setOverlay(overlay: Overlay): void {
    if (!this.space || !this.scales || overlay === this.state.overlay) {
      this.state.overlay = overlay;
      return;
    }
    this.state.overlay = overlay;
    recolorScene(
      this.el.graph,
      this.space,
      this.scales[overlay],
      overlay,
      this.digest,
    );
  }

  private renderAll(): void {
    if (!this.space || !this.countryData || !this.scales || !this.rankings) {
      return;
    }
    renderScene(this.el.graph, {
      space: this.space,
      country: this.countryData,
      scale: this.scales[this.state.overlay],
      overlay: this.state.overlay,
      digest: this.digest,
      onToggle: (product) => void this.toggleProduct(product),
    });
    renderRankings(
      this.el.sidebar,
      this.rankings,
      this.digest,
      this.state.country,
      (country) => void this.loadView(this.state.period, country),
    );
  }
}
