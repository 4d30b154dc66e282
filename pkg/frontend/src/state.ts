/** Explorer view state: selected period/country, overlay, basket edits.

 * Invariants enforced here: a product is never in both edit sets, and
 * edits may only reference products present in the loaded registry. */

import type { Overlay } from "./types.js";

export interface EditSets {
  added: Set<string>;
  removed: Set<string>;
}

export class ViewState {
  period = "";
  country = "";
  overlay: Overlay = "pgi";
  selection: string | null = null;
  readonly added = new Set<string>();
  readonly removed = new Set<string>();
  private registry = new Set<string>();
  private portfolio = new Set<string>();

  setView(period: string, country: string, registry: string[], portfolio: string[]): void {
    this.period = period;
    this.country = country;
    this.registry = new Set(registry);
    this.portfolio = new Set(portfolio);
    this.added.clear();
    this.removed.clear();
    this.selection = null;
  }

  inPortfolio(product: string): boolean {
    return this.portfolio.has(product);
  }

  knows(product: string): boolean {
    return this.registry.has(product);
  }

  /** Flip a product in or out of the hypothetical basket. Returns the
   * edit snapshot taken before the flip so a failed request can roll
   * back to it exactly. */
  toggle(product: string): EditSets {
    if (!this.registry.has(product)) {
      throw new Error(`unknown product ${product}`);
    }
    const before = this.snapshotEdits();
    if (this.added.has(product)) {
      this.added.delete(product);
    } else if (this.removed.has(product)) {
      this.removed.delete(product);
    } else if (this.portfolio.has(product)) {
      this.removed.add(product);
    } else {
      this.added.add(product);
    }
    return before;
  }

  snapshotEdits(): EditSets {
    return { added: new Set(this.added), removed: new Set(this.removed) };
  }

  restoreEdits(edits: EditSets): void {
    this.added.clear();
    this.removed.clear();
    for (const p of edits.added) this.added.add(p);
    for (const p of edits.removed) this.removed.add(p);
  }

  get hasEdits(): boolean {
    return this.added.size > 0 || this.removed.size > 0;
  }
}
