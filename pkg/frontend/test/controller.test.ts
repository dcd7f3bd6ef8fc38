import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { SessionController } from '../src/controller.js';
import { MockService, makeEntries } from './mock_service.js';

type Intent = { verdict: 'V' | 'P' | 'I' | 'invalid' | 'skipped'; specific: boolean; general: boolean };

const SCRIPT: Intent[] = [
  { verdict: 'V', specific: true, general: false },
  { verdict: 'P', specific: false, general: true },
  { verdict: 'I', specific: true, general: true },
  { verdict: 'invalid', specific: false, general: false },
  { verdict: 'skipped', specific: false, general: false },
];

async function applyIntent(controller: SessionController, intent: Intent): Promise<boolean> {
  if (intent.verdict === 'skipped') {
    return controller.skip();
  }
  controller.setVerdict(intent.verdict);
  if (intent.specific) controller.toggle('specific');
  if (intent.general) controller.toggle('general');
  return controller.submit();
}

describe('scripted session', () => {
  it('completes a 20-entry sheet; export equals intents; no 409; blinded', async () => {
    const service = new MockService(makeEntries(20));
    const api = new ApiClient(service.fetch);
    const controller = new SessionController(api, 'A1');
    await controller.start();

    const intents: { entry_id: string; intent: Intent }[] = [];
    let i = 0;
    while (!controller.view().finished) {
      const entryId = controller.view().current!.entry_id;
      const intent = SCRIPT[i % SCRIPT.length];
      intents.push({ entry_id: entryId, intent });
      const ok = await applyIntent(controller, intent);
      expect(ok).toBe(true);
      i += 1;
    }

    expect(controller.view().submitted).toBe(20);
    expect(service.posted.length).toBe(20);
    // Record-for-record equality with the scripted intents.
    expect(
      service.posted.map((record) => ({
        entry_id: record.entry_id,
        intent: {
          verdict: record.verdict as Intent['verdict'],
          specific: record.specific,
          general: record.general,
        },
      })),
    ).toEqual(intents);
    // No submission was ever rejected as malformed.
    expect(service.statuses.filter((status) => status === 409)).toEqual([]);
    // Blinding: no rendered payload ever mentions the variant tag.
    for (const payload of service.payloadsServed) {
      expect(payload.includes('variant')).toBe(false);
    }
  });

  it('walks entries in sheet order and tracks progress', async () => {
    const service = new MockService(makeEntries(4));
    const controller = new SessionController(new ApiClient(service.fetch), 'A1');
    await controller.start();
    expect(controller.view().current?.entry_id).toBe('e0001');
    expect(controller.progress()).toEqual({ done: 0, total: 4 });
    await applyIntent(controller, SCRIPT[0]);
    expect(controller.view().current?.entry_id).toBe('e0002');
    expect(controller.progress()).toEqual({ done: 1, total: 4 });
  });

  it('refuses to submit an empty draft and explains why', async () => {
    const service = new MockService(makeEntries(2));
    const controller = new SessionController(new ApiClient(service.fetch), 'A1');
    await controller.start();
    expect(await controller.submit()).toBe(false);
    expect(controller.view().message).toMatch(/choose/i);
    expect(service.posted).toEqual([]);
  });

  it('requires a flag for V unless override is armed', async () => {
    const service = new MockService(makeEntries(2));
    const controller = new SessionController(new ApiClient(service.fetch), 'A1');
    await controller.start();
    controller.setVerdict('V');
    expect(await controller.submit()).toBe(false);
    expect(controller.view().message).toMatch(/Specific/);
    controller.setOverride();
    expect(await controller.submit()).toBe(true);
    expect(service.posted[0]).toMatchObject({ verdict: 'V', specific: false, general: false });
  });

  it('loads concordance instances for every entry', async () => {
    const service = new MockService(makeEntries(3));
    const controller = new SessionController(new ApiClient(service.fetch), 'A1');
    await controller.start();
    const view = controller.view();
    expect(view.concordance.length).toBeGreaterThan(0);
    const instance = view.concordance[0];
    const [start, end] = instance.source_focus;
    expect(instance.source_window.slice(start, end)).toBe(view.current!.source);
  });

  it('surfaces unknown annotators as an API error', async () => {
    const service = new MockService(makeEntries(2));
    const controller = new SessionController(new ApiClient(service.fetch), 'A9');
    await expect(controller.start()).rejects.toMatchObject({ status: 404 });
  });
});
