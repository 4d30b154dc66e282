/** What-if evaluation loop around the service endpoint.

 * Toggles post the full current edit set; every request carries a
 * monotone sequence number and a response is applied only when no newer
 * response has landed (last-write-wins), so rapid double-toggles never
 * leave a stale panel. A failed request rolls its edit back (toggling is
 * an involution on the edit sets) and surfaces the error. */

import type { ApiClient } from "./api.js";
import type { ViewState } from "./state.js";
import type { WhatIfResponse } from "./types.js";

export interface PanelUpdate {
  result: WhatIfResponse;
  seq: number;
}

export class WhatIfController {
  private seq = 0;
  private applied = 0;
  private history: string[] = [];
  lastResult: WhatIfResponse | null = null;

  constructor(
    private readonly api: ApiClient,
    private readonly state: ViewState,
  ) {}

  /** Toggle a product and evaluate the new basket. Resolves with the
   * panel update, or null when this response arrived stale. */
  async toggle(product: string): Promise<PanelUpdate | null> {
    this.state.toggle(product);
    this.history.push(product);
    try {
      return await this.evaluate();
    } catch (err) {
      this.state.toggle(product); // exact rollback: toggle is an involution
      const at = this.history.lastIndexOf(product);
      if (at >= 0) this.history.splice(at, 1);
      throw err;
    }
  }

  /** Undo the most recent toggle exactly and re-evaluate the panel. */
  async undo(): Promise<PanelUpdate | null> {
    const product = this.history.pop();
    if (product === undefined) return null;
    this.state.toggle(product);
    return this.evaluate();
  }

  reset(): void {
    this.seq = 0;
    this.applied = 0;
    this.history = [];
    this.lastResult = null;
  }

  private async evaluate(): Promise<PanelUpdate | null> {
    const mySeq = ++this.seq;
    const result = await this.api.whatIf({
      country: this.state.country,
      period: this.state.period,
      add: [...this.state.added].sort(),
      remove: [...this.state.removed].sort(),
    });
    if (mySeq <= this.applied) {
      return null; // a newer response already landed
    }
    this.applied = mySeq;
    this.lastResult = result;
    return { result, seq: mySeq };
  }
}
