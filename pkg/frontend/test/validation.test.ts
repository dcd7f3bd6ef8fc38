import { describe, expect, it } from 'vitest';

import { Draft, Verdict, emptyDraft } from '../src/types.js';
import { submitGate, toRecord, toggleFlag, withVerdict } from '../src/validation.js';

const VERDICTS: Verdict[] = ['V', 'P', 'I', 'invalid', 'skipped'];

// The server rejects exactly these combinations with 409.
function serverRejects(record: { verdict: string; specific: boolean; general: boolean }): boolean {
  if (!VERDICTS.includes(record.verdict as Verdict)) return true;
  return (
    (record.verdict === 'invalid' || record.verdict === 'skipped') &&
    (record.specific || record.general)
  );
}

function allDrafts(): Draft[] {
  const drafts: Draft[] = [];
  for (const verdict of [...VERDICTS, null] as (Verdict | null)[]) {
    for (const specific of [false, true]) {
      for (const general of [false, true]) {
        for (const override of [false, true]) {
          drafts.push({ verdict, specific, general, override });
        }
      }
    }
  }
  return drafts;
}

describe('submitGate', () => {
  it('never lets through a combination the server would 409', () => {
    for (const draft of allDrafts()) {
      const gate = submitGate(draft);
      if (gate.ok) {
        expect(serverRejects(toRecord('A1', draft))).toBe(false);
      }
    }
  });

  it('requires a verdict', () => {
    expect(submitGate(emptyDraft()).ok).toBe(false);
  });

  it('requires a usefulness flag for V/P/I unless overridden', () => {
    const bare: Draft = { verdict: 'V', specific: false, general: false, override: false };
    expect(submitGate(bare).ok).toBe(false);
    expect(submitGate({ ...bare, specific: true }).ok).toBe(true);
    expect(submitGate({ ...bare, override: true }).ok).toBe(true);
  });

  it('passes invalid and skipped without flags', () => {
    expect(submitGate(withVerdict(emptyDraft(), 'invalid')).ok).toBe(true);
    expect(submitGate(withVerdict(emptyDraft(), 'skipped')).ok).toBe(true);
  });
});

describe('withVerdict / toggleFlag', () => {
  it('selecting invalid clears and locks the flags', () => {
    let draft = emptyDraft();
    draft = withVerdict(draft, 'P');
    draft = toggleFlag(draft, 'specific');
    draft = toggleFlag(draft, 'general');
    draft = withVerdict(draft, 'invalid');
    expect(draft.specific).toBe(false);
    expect(draft.general).toBe(false);
    expect(toggleFlag(draft, 'specific')).toEqual(draft);
  });

  it('flags cannot be set before a verdict type is chosen', () => {
    expect(toggleFlag(emptyDraft(), 'specific')).toEqual(emptyDraft());
  });

  it('toggling a flag disarms a previous override', () => {
    let draft = withVerdict(emptyDraft(), 'V');
    draft = { ...draft, override: true };
    draft = toggleFlag(draft, 'specific');
    expect(draft.override).toBe(false);
  });

  it('toRecord refuses unsubmittable drafts', () => {
    expect(() => toRecord('A1', emptyDraft())).toThrow();
  });
});
