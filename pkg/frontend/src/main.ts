// Bootstrap: annotator sign-in, keyboard wiring, render loop, report view.

import { ApiClient } from './api.js';
import { SessionController } from './controller.js';
import { actionForKey } from './keys.js';
import { renderCard, renderKappaReport, renderPrecisionReport, renderProgress } from './render.js';

const api = new ApiClient();

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function showReports(root: HTMLElement): Promise<void> {
  root.replaceChildren();
  const [precision, kappa] = await Promise.all([api.precisionReport(), api.kappaReport()]);
  root.appendChild(renderPrecisionReport(document, precision));
  root.appendChild(renderKappaReport(document, kappa));
}

async function runSession(annotator: string): Promise<void> {
  const controller = new SessionController(api, annotator);
  const cardRoot = byId('card-root');
  const progressRoot = byId('progress-root');

  const redraw = () => {
    const state = controller.view();
    cardRoot.replaceChildren(renderCard(document, state));
    const progress = controller.progress();
    progressRoot.replaceChildren(renderProgress(document, progress.done, progress.total));
    cardRoot.querySelectorAll<HTMLButtonElement>('button[data-verdict]').forEach((button) => {
      button.addEventListener('click', () => {
        controller.setVerdict(button.dataset.verdict as never);
        redraw();
      });
    });
    cardRoot.querySelectorAll<HTMLButtonElement>('button[data-flag]').forEach((button) => {
      button.addEventListener('click', () => {
        controller.toggle(button.dataset.flag as 'specific' | 'general');
        redraw();
      });
    });
    cardRoot.querySelector<HTMLButtonElement>('button[data-action="submit"]')?.addEventListener(
      'click',
      () => void act(() => controller.submit()),
    );
    cardRoot.querySelector<HTMLButtonElement>('button[data-action="skip"]')?.addEventListener(
      'click',
      () => void act(() => controller.skip()),
    );
  };

  const act = async (step: () => Promise<boolean>) => {
    try {
      await step();
    } catch (error) {
      // Non-destructive: the draft stays, the reviewer can retry.
      const state = controller.view() as { message: string };
      state.message = `Request failed (${String(error)}). Nothing was lost; retry.`;
    }
    redraw();
    if (controller.view().finished) {
      await showReports(byId('report-root')).catch(() => undefined);
    }
  };

  document.addEventListener('keydown', (event) => {
    if ((event.target as HTMLElement | null)?.tagName === 'INPUT') return;
    const action = actionForKey(event.key);
    if (!action || controller.view().finished) return;
    event.preventDefault();
    switch (action.kind) {
      case 'verdict':
        controller.setVerdict(action.verdict);
        redraw();
        break;
      case 'flag':
        controller.toggle(action.flag);
        redraw();
        break;
      case 'override':
        controller.setOverride();
        redraw();
        break;
      case 'skip':
        void act(() => controller.skip());
        break;
      case 'submit':
        void act(() => controller.submit());
        break;
    }
  });

  await controller.start();
  redraw();
}

async function init(): Promise<void> {
  const form = byId('signin') as HTMLFormElement;
  const input = byId('annotator') as HTMLInputElement;
  const info = await api.session();
  byId('session-info').textContent =
    `${info.sheet_size} entries; annotators: ${info.annotators.join(', ')}`;
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    const annotator = input.value.trim();
    if (!annotator) return;
    form.hidden = true;
    void runSession(annotator);
  });
  byId('show-reports').addEventListener('click', () => {
    void showReports(byId('report-root'));
  });
}

void init();
