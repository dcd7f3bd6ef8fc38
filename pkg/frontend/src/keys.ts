// Keyboard-first interaction: one key per questionnaire action so a
// 400-entry sheet stays cheap. The map is plain data for easy testing.

export type Action =
  | { kind: 'verdict'; verdict: 'V' | 'P' | 'I' | 'invalid' }
  | { kind: 'flag'; flag: 'specific' | 'general' }
  | { kind: 'skip' }
  | { kind: 'submit' }
  | { kind: 'override' };

export const KEY_BINDINGS: Record<string, Action> = {
  v: { kind: 'verdict', verdict: 'V' },
  p: { kind: 'verdict', verdict: 'P' },
  i: { kind: 'verdict', verdict: 'I' },
  x: { kind: 'verdict', verdict: 'invalid' },
  s: { kind: 'flag', flag: 'specific' },
  g: { kind: 'flag', flag: 'general' },
  k: { kind: 'skip' },
  o: { kind: 'override' },
  enter: { kind: 'submit' },
};

export function actionForKey(key: string): Action | null {
  return KEY_BINDINGS[key.toLowerCase()] ?? null;
}
