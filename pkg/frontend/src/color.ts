/** Diverging color scale over fixed quantile bins of the period's values.

 * Bins are frozen when the scale is built (the period's PGI or PCI range),
 * so recoloring on overlay toggle never refetches or re-bins per node. */

const DIVERGING = ["#2166ac", "#67a9cf", "#bdbdbd", "#ef8a62", "#b2182b"];
export const MISSING_COLOR = "#e0e0e0";

export interface ColorScale {
  bins: number[]; // upper quantile edges, length = colors - 1
  color(value: number | null): string;
  bin(value: number): number;
}

function quantile(sorted: number[], q: number): number {
  if (sorted.length === 0) return NaN;
  const pos = q * (sorted.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  const a = sorted[lo]!;
  const b = sorted[hi]!;
  return a + (b - a) * (pos - lo);
}

export function makeScale(values: (number | null)[], invert = false): ColorScale {
  const present = values.filter((v): v is number => v !== null).sort((a, b) => a - b);
  const n = DIVERGING.length;
  const bins: number[] = [];
  for (let i = 1; i < n; i++) {
    bins.push(quantile(present, i / n));
  }
  const palette = invert ? [...DIVERGING].reverse() : DIVERGING;
  const bin = (value: number): number => {
    let b = 0;
    while (b < bins.length && value > bins[b]!) b += 1;
    return b;
  };
  return {
    bins,
    bin,
    color(value: number | null): string {
      if (value === null || Number.isNaN(value)) return MISSING_COLOR;
      return palette[bin(value)]!;
    },
  };
}
