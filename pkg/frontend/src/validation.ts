// Client-side mirror of the service's annotation invariants. The submit
// gate must be at least as strict as the server's 409 rules, so a payload
// that passes here can never be rejected as malformed.

import { AnnotationRecord, Draft, Verdict } from './types.js';

export const VALID_TYPES: Verdict[] = ['V', 'P', 'I'];

export type Gate = { ok: true } | { ok: false; reason: string };

export function flagsAllowed(verdict: Verdict | null): boolean {
  return verdict !== null && VALID_TYPES.includes(verdict);
}

/** Apply a verdict to a draft, clearing flags the verdict excludes. */
export function withVerdict(draft: Draft, verdict: Verdict): Draft {
  if (verdict === 'invalid' || verdict === 'skipped') {
    return { verdict, specific: false, general: false, override: false };
  }
  return { ...draft, verdict };
}

export function toggleFlag(draft: Draft, flag: 'specific' | 'general'): Draft {
  if (!flagsAllowed(draft.verdict)) {
    return draft;
  }
  return { ...draft, [flag]: !draft[flag], override: false };
}

export function submitGate(draft: Draft): Gate {
  if (draft.verdict === null) {
    return { ok: false, reason: 'Choose Invalid, V, P, I, or skip first.' };
  }
  if ((draft.verdict === 'invalid' || draft.verdict === 'skipped') && (draft.specific || draft.general)) {
    // Unreachable through withVerdict/toggleFlag; kept as a hard backstop.
    return { ok: false, reason: 'Invalid and skipped entries take no usefulness flags.' };
  }
  if (VALID_TYPES.includes(draft.verdict) && !draft.specific && !draft.general && !draft.override) {
    return {
      ok: false,
      reason:
        'Pick Specific and/or General. If neither fits, reconsider Invalid — or press o to submit anyway.',
    };
  }
  return { ok: true };
}

export function toRecord(annotator: string, draft: Draft): AnnotationRecord {
  const gate = submitGate(draft);
  if (!gate.ok || draft.verdict === null) {
    throw new Error('draft is not submittable');
  }
  return {
    annotator,
    verdict: draft.verdict,
    specific: draft.specific,
    general: draft.general,
  };
}
