// DOM builders. Everything renders from service payloads only, so the
// sampling provenance can never leak into the page.

import { ControllerState } from './controller.js';
import {
  ConcordanceInstancePayload,
  KappaReportPayload,
  PrecisionReportPayload,
} from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** A context line with the focus span wrapped in <mark>. Uses the payload's
 *  focus offsets, never string search, so repeated words stay unambiguous. */
export function renderWindow(
  doc: Document,
  text: string,
  focus: [number, number],
  className: string,
): HTMLElement {
  const [start, end] = focus;
  const line = el(doc, 'div', className);
  line.appendChild(doc.createTextNode(text.slice(0, start)));
  const mark = el(doc, 'mark', 'focus', text.slice(start, end));
  line.appendChild(mark);
  line.appendChild(doc.createTextNode(text.slice(end)));
  return line;
}

export function renderConcordance(
  doc: Document,
  instances: ConcordanceInstancePayload[],
): HTMLElement {
  const panel = el(doc, 'section', 'concordance');
  if (instances.length === 0) {
    panel.appendChild(el(doc, 'p', 'empty', 'No banded instances for this pair.'));
    return panel;
  }
  for (const instance of instances) {
    const block = el(doc, 'div', 'instance');
    block.appendChild(renderWindow(doc, instance.source_window, instance.source_focus, 'source'));
    block.appendChild(renderWindow(doc, instance.target_window, instance.target_focus, 'target'));
    panel.appendChild(block);
  }
  return panel;
}

export function renderCard(doc: Document, state: ControllerState): HTMLElement {
  const card = el(doc, 'section', 'card');
  if (state.current === null) {
    card.appendChild(el(doc, 'h2', 'done', state.message || 'No entry loaded.'));
    return card;
  }
  const entry = state.current;
  const header = el(doc, 'header');
  header.appendChild(el(doc, 'span', 'position', `${entry.position} / ${entry.total}`));
  const pair = el(doc, 'h2', 'pair');
  pair.appendChild(el(doc, 'span', 'source-form', entry.source));
  pair.appendChild(el(doc, 'span', 'sep', ' / '));
  pair.appendChild(el(doc, 'span', 'target-form', entry.target));
  header.appendChild(pair);
  if (entry.pos_hint) {
    header.appendChild(el(doc, 'span', 'pos-hint', `hint: ${entry.pos_hint}`));
  }
  card.appendChild(header);
  card.appendChild(renderConcordance(doc, state.concordance));
  card.appendChild(renderControls(doc, state));
  if (state.message) {
    card.appendChild(el(doc, 'p', 'message', state.message));
  }
  return card;
}

function renderControls(doc: Document, state: ControllerState): HTMLElement {
  const draft = state.draft;
  const controls = el(doc, 'div', 'controls');
  const verdicts = el(doc, 'div', 'verdicts');
  for (const [verdict, label] of [
    ['invalid', 'Invalid (x)'],
    ['V', 'V — plain pair (v)'],
    ['P', 'P — part-of-speech shift (p)'],
    ['I', 'I — incomplete fragment (i)'],
  ] as const) {
    const button = el(doc, 'button', draft.verdict === verdict ? 'selected' : '', label);
    button.dataset.verdict = verdict;
    verdicts.appendChild(button);
  }
  controls.appendChild(verdicts);

  const flags = el(doc, 'div', 'flags');
  const flagsEnabled = draft.verdict !== null && !['invalid', 'skipped'].includes(draft.verdict);
  for (const [flag, label] of [
    ['specific', 'Specific (s)'],
    ['general', 'General (g)'],
  ] as const) {
    const button = el(doc, 'button', draft[flag] ? 'selected' : '', label);
    button.dataset.flag = flag;
    button.disabled = !flagsEnabled;
    flags.appendChild(button);
  }
  controls.appendChild(flags);

  const actions = el(doc, 'div', 'actions');
  const submit = el(doc, 'button', 'submit', 'Submit (enter)');
  submit.dataset.action = 'submit';
  const skip = el(doc, 'button', 'skip', 'Skip (k)');
  skip.dataset.action = 'skip';
  actions.appendChild(submit);
  actions.appendChild(skip);
  controls.appendChild(actions);
  return controls;
}

export function renderProgress(doc: Document, done: number, total: number): HTMLElement {
  const bar = el(doc, 'div', 'progress');
  const pct = total === 0 ? 0 : Math.round((100 * done) / total);
  bar.appendChild(el(doc, 'span', 'progress-text', `${done}/${total} (${pct}%)`));
  const track = el(doc, 'div', 'track');
  const fill = el(doc, 'div', 'fill');
  fill.style.width = `${pct}%`;
  track.appendChild(fill);
  bar.appendChild(track);
  return bar;
}

export function renderPrecisionReport(
  doc: Document,
  report: PrecisionReportPayload,
): HTMLElement {
  const section = el(doc, 'section', 'report');
  section.appendChild(el(doc, 'h3', undefined, 'Validity summary'));
  if (report.summary === null) {
    section.appendChild(el(doc, 'p', 'empty', 'No annotations yet.'));
    return section;
  }
  const table = el(doc, 'table');
  for (const [key, value] of Object.entries(report.summary)) {
    const row = el(doc, 'tr');
    row.appendChild(el(doc, 'td', 'key', key));
    row.appendChild(el(doc, 'td', 'value', String(value)));
    table.appendChild(row);
  }
  section.appendChild(table);
  return section;
}

export function renderKappaReport(doc: Document, report: KappaReportPayload): HTMLElement {
  const section = el(doc, 'section', 'report');
  section.appendChild(el(doc, 'h3', undefined, 'Agreement with the group'));
  const names = Object.keys(report.annotators).sort();
  if (names.length === 0) {
    section.appendChild(el(doc, 'p', 'empty', 'No annotations yet.'));
    return section;
  }
  const table = el(doc, 'table');
  const head = el(doc, 'tr');
  head.appendChild(el(doc, 'th', undefined, 'annotator'));
  for (const k of ['kappa1', 'kappa2', 'kappa3', 'kappa4']) {
    head.appendChild(el(doc, 'th', undefined, k));
  }
  table.appendChild(head);
  for (const name of names) {
    const row = el(doc, 'tr');
    row.appendChild(el(doc, 'td', undefined, name));
    for (const k of ['kappa1', 'kappa2', 'kappa3', 'kappa4']) {
      const cell = report.annotators[name][k];
      const value = cell && cell.kappa !== null ? cell.kappa.toFixed(2) : 'n/a';
      row.appendChild(el(doc, 'td', 'value', value));
    }
    table.appendChild(row);
  }
  section.appendChild(table);
  return section;
}
