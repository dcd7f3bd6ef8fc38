// Payload shapes of the review service API. Entry payloads deliberately
// carry no sampling provenance: annotators must stay blind to it.

export type Verdict = 'V' | 'P' | 'I' | 'invalid' | 'skipped';

export interface SessionInfo {
  sheet_size: number;
  annotators: string[];
  progress: Record<string, { pending: number; done: number; skipped: number }>;
  log_records: number;
}

export interface EntryPayload {
  entry_id: string;
  position: number;
  total: number;
  source: string;
  target: string;
  pos_hint: string | null;
}

export interface ConcordanceInstancePayload {
  source_window: string;
  target_window: string;
  source_focus: [number, number];
  target_focus: [number, number];
}

export interface EntryListing {
  annotator: string;
  status: string;
  entry_ids: string[];
  counts: { pending: number; done: number; skipped: number };
}

export interface AnnotationRecord {
  annotator: string;
  verdict: Verdict;
  specific: boolean;
  general: boolean;
}

export interface KappaCell {
  kappa: number | null;
  p_o: number | null;
  p_e: number | null;
  n: number;
}

export interface KappaReportPayload {
  annotators: Record<string, Record<string, KappaCell>>;
}

export interface PrecisionReportPayload {
  n: number;
  summary: Record<string, number> | null;
}

export interface Draft {
  verdict: Verdict | null;
  specific: boolean;
  general: boolean;
  /** Explicit confirmation that a V/P/I verdict goes out with neither
   *  usefulness flag; the questionnaire asks reviewers to reconsider. */
  override: boolean;
}

export function emptyDraft(): Draft {
  return { verdict: null, specific: false, general: false, override: false };
}
