// Shapes served by the triage HTTP API. The UI renders these verbatim and
// never derives domain values of its own.

export interface MatchHit {
  pattern: string;
  kind: string;
  span: [number, number];
  text: string;
}

export interface SourceCandidate {
  schema?: string;
  unit_id?: string;
  tier: string;
  ref: string | null;
  score: number;
  rank: number;
}

export interface AuditActor {
  kind: 'system' | 'human';
  id: string | null;
}

export interface AuditEntry {
  case_id: string;
  action: string;
  actor: AuditActor;
  timestamp: string;
  payload: Record<string, unknown>;
  resulting_state: string;
  resulting_version: number;
}

export interface CaseSummary {
  case_id: string;
  unit_id: string;
  app_id: string;
  store: string;
  state: string;
  version: number;
  rating: number;
  language: string;
  filter_label: string | null;
  confirmed_label: string | null;
  resolution: string | null;
  snippet: string;
}

export interface TeamRankEntry {
  team: string;
  percent: number | null;
}

export interface CaseDetail {
  case_id: string;
  unit_id: string;
  store: string;
  app_id: string;
  review_id: string;
  ordinal: number;
  review_text: string;
  rating: number;
  language: string;
  state: string;
  version: number;
  filter_label: string | null;
  filter_hits: MatchHit[];
  confirmed_label: string | null;
  suggestion: [string, number][] | null;
  suggestion_tags: string[];
  confirmed_category: string | null;
  team_ranking: string[] | null;
  team_ranking_detail: TeamRankEntry[] | null;
  confirmed_team: string | null;
  team_override: boolean;
  source_candidates: SourceCandidate[] | null;
  chosen_source: SourceCandidate | null;
  response_text: string | null;
  resolution: string | null;
  allowed_actions: string[];
  audit: AuditEntry[];
}

export interface QueuePage {
  cases: CaseSummary[];
  total: number;
  page: number;
  page_size: number;
}

export interface HitRateReport {
  n_cases: number;
  overall: number;
  per_rank: Record<string, number>;
}

export interface AddressabilityReport {
  confirmed_terminal: number;
  in_flight: number;
  no_need: number;
  by_resolution: Record<string, number>;
  fractions: Record<string, number | null>;
  resolved: number;
  resolved_percent: number | null;
  resolved_percent_display: number | null;
  no_data: boolean;
  team_hit_rate: HitRateReport | null;
}

export interface AgreementGroup {
  raters: string[];
  n_units: number;
  statistic: string;
  category_kappa: number | null;
  category_band: string | null;
  supercategory_kappa: number | null;
  supercategory_band: string | null;
  team_kappa: number | null;
  team_band: string | null;
}

export interface AgreementReport {
  groups: AgreementGroup[];
  no_data: boolean;
}

export interface StatsRow {
  app_id: string;
  store: string;
  explicit: number;
  implicit: number;
  potential: number;
  none: number;
}

export interface StatsReport {
  rows: StatsRow[];
  cases: number;
}

export interface MetaInfo {
  taxonomy: {
    subcategories: string[];
    supercategories: string[];
    rollup: Record<string, string>;
    standalone: string[];
  };
  teams: { name: string; description: string }[];
}

export type DecideResult =
  | { ok: true; case: CaseDetail }
  | { ok: false; conflict: true; reason: string; case: CaseDetail };
