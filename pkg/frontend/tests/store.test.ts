import { describe, expect, it } from 'vitest';

import { ApiError, ReportingApi, SessionState, SuggestionInfo } from '../src/api.js';
import { WizardStore } from '../src/state.js';

// Scripted fake of the HTTP client: the store must mirror exactly what the
// server says, so every returned value here is deliberately arbitrary.
class FakeApi {
  calls: string[] = [];
  suggestionsByCall: SuggestionInfo[][] = [];
  private suggestionCall = 0;

  constructor(private stepResponses: SessionState[]) {}

  async openSession(assumeLaunch: boolean) {
    this.calls.push(`open:${assumeLaunch}`);
    return { session_id: 'sess-1', estimate_size: 7, degraded: false };
  }

  async suggestions(_id: string) {
    this.calls.push('suggestions');
    return this.suggestionsByCall[this.suggestionCall++] ?? [];
  }

  async confirmStep(_id: string, component: string, _action: string, source: string) {
    this.calls.push(`confirm:${component}@${source}`);
    return this.stepResponses.shift()!;
  }

  async fallbackStep(_id: string, _activity: string, component: string, _action: string) {
    this.calls.push(`fallback:${component}`);
    return this.stepResponses.shift()!;
  }

  async undoStep(_id: string) {
    this.calls.push('undo');
    return this.stepResponses.shift()!;
  }

  async finalize(_id: string, title: string, _description: string) {
    this.calls.push(`finalize:${title}`);
    return { report_id: 'r-42' };
  }
}

const SUGGESTION: SuggestionInfo = {
  component: 'chkOpt', activity: 'Main', action: 'tap',
  variants: [{ source_state: 's0', target: { kind: 'state', state: 's1' },
               screenshot_url: '/screenshots/s0_chkOpt.ppm' }],
};

function makeStore(stepResponses: SessionState[]): [WizardStore, FakeApi] {
  const fake = new FakeApi(stepResponses);
  const store = new WizardStore(fake as unknown as ReportingApi);
  return [store, fake];
}

describe('WizardStore', () => {
  it('mirrors the server values on open, fabricating nothing', async () => {
    const [store, fake] = makeStore([]);
    fake.suggestionsByCall = [[SUGGESTION]];
    await store.open(true);
    expect(store.estimateSize).toBe(7); // exactly the server's number, however odd
    expect(store.degraded).toBe(false);
    expect(store.suggestions).toEqual([SUGGESTION]);
    expect(fake.calls).toEqual(['open:true', 'suggestions']);
  });

  it('appends a step and refetches suggestions on confirm', async () => {
    const [store, fake] = makeStore([{ estimate_size: 1, degraded: false }]);
    fake.suggestionsByCall = [[SUGGESTION], []];
    await store.open(true);
    await store.confirm('chkOpt', 'tap', 's0');
    expect(store.steps).toHaveLength(1);
    expect(store.steps[0]).toMatchObject({
      component: 'chkOpt', activity: 'Main', verified: true,
      screenshotUrl: '/screenshots/s0_chkOpt.ppm',
    });
    expect(store.estimateSize).toBe(1);
    expect(store.suggestions).toEqual([]);
    expect(fake.calls).toContain('confirm:chkOpt@s0');
  });

  it('marks fallback steps unverified and mirrors degraded', async () => {
    const [store, fake] = makeStore([{ estimate_size: 4, degraded: true }]);
    fake.suggestionsByCall = [[], []];
    await store.open(false);
    await store.fallback('Main', 'btnGo', 'tap');
    expect(store.degraded).toBe(true);
    expect(store.estimateSize).toBe(4);
    expect(store.steps[0].verified).toBe(false);
  });

  it('pops the last step on undo', async () => {
    const [store, fake] = makeStore([
      { estimate_size: 1, degraded: false },
      { estimate_size: 7, degraded: false },
    ]);
    fake.suggestionsByCall = [[SUGGESTION], [], [SUGGESTION]];
    await store.open(true);
    await store.confirm('chkOpt', 'tap', 's0');
    await store.undo();
    expect(store.steps).toHaveLength(0);
    expect(store.estimateSize).toBe(7);
    expect(store.suggestions).toEqual([SUGGESTION]);
  });

  it('rejects an empty title locally before calling the server', async () => {
    const [store, fake] = makeStore([]);
    fake.suggestionsByCall = [[]];
    await store.open(true);
    store.title = '   ';
    await store.finalize();
    expect(store.error).toContain('title');
    expect(fake.calls.filter((c) => c.startsWith('finalize'))).toHaveLength(0);
  });

  it('stores the report id after finalizing', async () => {
    const [store, fake] = makeStore([{ estimate_size: 1, degraded: false }]);
    fake.suggestionsByCall = [[SUGGESTION], []];
    await store.open(true);
    await store.confirm('chkOpt', 'tap', 's0');
    store.title = 'Crash';
    await store.finalize();
    expect(store.reportId).toBe('r-42');
  });

  it('surfaces server errors as messages', async () => {
    const [store, fake] = makeStore([]);
    fake.suggestionsByCall = [[]];
    fake.confirmStep = async () => { throw new ApiError(404, 'not suggested'); };
    await store.open(true);
    await store.confirm('nope', 'tap', 's0');
    expect(store.error).toBe('404: not suggested');
    expect(store.steps).toHaveLength(0);
  });

  it('notifies subscribers on every state change', async () => {
    const [store, fake] = makeStore([]);
    fake.suggestionsByCall = [[]];
    let notified = 0;
    store.subscribe(() => { notified += 1; });
    await store.open(true);
    expect(notified).toBeGreaterThanOrEqual(2); // busy flip plus completion
  });
});
