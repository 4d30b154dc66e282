/** Payload shapes exactly as the snapshot service serializes them. */

export interface PeriodInfo {
  id: string;
  start_year: number;
  end_year: number;
  empty: boolean;
}

export interface PeriodsResponse {
  periods: PeriodInfo[];
  content_digest: string;
}

export interface RankingEntry {
  rank: number;
  country: string;
  [metric: string]: number | string;
}

export interface RankingsResponse {
  period: string;
  metric: string;
  entries: RankingEntry[];
  unranked: string[];
}

export interface SpaceNode {
  id: string;
  size: number;
  pgi: number | null;
  pci: number | null;
}

export interface SpaceLink {
  source: string;
  target: string;
  phi: number;
}

export interface ProductSpaceResponse {
  period: string;
  nodes: SpaceNode[];
  links: SpaceLink[];
}

export interface PortfolioItem {
  product: string;
  share: number;
}

export interface CountryResponse {
  period: string;
  country: string;
  portfolio: PortfolioItem[];
  expected_gini: number | null;
  scores: Record<string, number | null>;
  gini: number | null;
}

export interface WhatIfEdit {
  product: string;
  share: number;
}

export interface WhatIfResponse {
  period: string;
  country: string;
  baseline: number;
  scenario: number;
  delta: number;
  added: WhatIfEdit[];
  removed: string[];
}

export interface WhatIfRequest {
  country: string;
  period: string;
  add: string[];
  remove: string[];
}

export type Overlay = "pgi" | "pci";
