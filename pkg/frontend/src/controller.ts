// Session flow: walk the pending sheet in order, hold the draft for the
// current entry, validate before posting, advance on success. All state is
// server-authoritative; the controller only caches what it rendered.

import { ApiClient } from './api.js';
import {
  ConcordanceInstancePayload,
  Draft,
  EntryPayload,
  emptyDraft,
  Verdict,
} from './types.js';
import { submitGate, toRecord, toggleFlag, withVerdict } from './validation.js';

export interface ControllerState {
  annotator: string;
  queue: string[];
  index: number;
  current: EntryPayload | null;
  concordance: ConcordanceInstancePayload[];
  draft: Draft;
  message: string;
  finished: boolean;
  submitted: number;
}

export class SessionController {
  private state: ControllerState;

  constructor(private readonly api: ApiClient, annotator: string) {
    this.state = {
      annotator,
      queue: [],
      index: 0,
      current: null,
      concordance: [],
      draft: emptyDraft(),
      message: '',
      finished: false,
      submitted: 0,
    };
  }

  view(): Readonly<ControllerState> {
    return this.state;
  }

  async start(): Promise<void> {
    const listing = await this.api.entries(this.state.annotator, 'pending');
    this.state.queue = listing.entry_ids;
    this.state.index = 0;
    if (this.state.queue.length === 0) {
      this.state.finished = true;
      this.state.message = 'Nothing pending for this annotator.';
      return;
    }
    await this.loadCurrent();
  }

  private async loadCurrent(): Promise<void> {
    const entryId = this.state.queue[this.state.index];
    this.state.current = await this.api.entry(entryId);
    this.state.concordance = await this.api.concordance(entryId);
    this.state.draft = emptyDraft();
    this.state.message = '';
  }

  setVerdict(verdict: Verdict): void {
    if (this.state.current === null) return;
    this.state.draft = withVerdict(this.state.draft, verdict);
    this.state.message = '';
  }

  toggle(flag: 'specific' | 'general'): void {
    if (this.state.current === null) return;
    this.state.draft = toggleFlag(this.state.draft, flag);
  }

  setOverride(): void {
    if (this.state.current === null) return;
    this.state.draft = { ...this.state.draft, override: true };
    this.state.message = 'Override armed: submit will proceed without a flag.';
  }

  async skip(): Promise<boolean> {
    this.setVerdict('skipped');
    return this.submit();
  }

  async submit(): Promise<boolean> {
    const current = this.state.current;
    if (current === null) return false;
    const gate = submitGate(this.state.draft);
    if (!gate.ok) {
      this.state.message = gate.reason;
      return false;
    }
    await this.api.annotate(current.entry_id, toRecord(this.state.annotator, this.state.draft));
    this.state.submitted += 1;
    return this.advance();
  }

  private async advance(): Promise<boolean> {
    this.state.index += 1;
    if (this.state.index >= this.state.queue.length) {
      this.state.finished = true;
      this.state.current = null;
      this.state.concordance = [];
      this.state.message = 'Sheet complete.';
      return true;
    }
    await this.loadCurrent();
    return true;
  }

  progress(): { done: number; total: number } {
    return { done: this.state.index, total: this.state.queue.length };
  }
}
