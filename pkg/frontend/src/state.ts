// Wizard state. Every estimate_size/degraded value shown by the UI is copied
// verbatim from the most recent server response; suggestions are refetched
// after each mutation; mutations are serialized through the busy flag.

import { ApiError, ReportingApi, SessionState, SuggestionInfo } from './api.js';

export interface ConfirmedStepView {
  index: number;
  component: string;
  activity: string;
  action: string;
  verified: boolean;
  sourceState?: string;
  screenshotUrl?: string;
}

type Listener = () => void;

export class WizardStore {
  sessionId: string | null = null;
  assumeLaunch = true;
  suggestions: SuggestionInfo[] = [];
  steps: ConfirmedStepView[] = [];
  estimateSize: number | null = null;
  degraded = false;
  title = '';
  description = '';
  reportId: string | null = null;
  error: string | null = null;
  busy = false;

  private listeners: Listener[] = [];

  constructor(private api: ReportingApi) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  private applySessionState(state: SessionState): void {
    this.estimateSize = state.estimate_size;
    this.degraded = state.degraded;
  }

  private async mutate(operation: () => Promise<void>): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    this.error = null;
    this.notify();
    try {
      await operation();
    } catch (err) {
      this.error = err instanceof ApiError ? err.message : String(err);
    } finally {
      this.busy = false;
      this.notify();
    }
  }

  async open(assumeLaunch: boolean): Promise<void> {
    await this.mutate(async () => {
      const opened = await this.api.openSession(assumeLaunch);
      this.sessionId = opened.session_id;
      this.assumeLaunch = assumeLaunch;
      this.steps = [];
      this.reportId = null;
      this.applySessionState(opened);
      this.suggestions = await this.api.suggestions(opened.session_id);
    });
  }

  async confirm(component: string, action: string, sourceState: string): Promise<void> {
    await this.mutate(async () => {
      if (!this.sessionId) throw new Error('no open session');
      const suggestion = this.suggestions.find(
        (s) => s.component === component && s.action === action);
      const variant = suggestion?.variants.find((v) => v.source_state === sourceState);
      const state = await this.api.confirmStep(this.sessionId, component, action, sourceState);
      this.steps.push({
        index: this.steps.length + 1,
        component,
        activity: suggestion?.activity ?? '',
        action,
        verified: true,
        sourceState,
        screenshotUrl: variant?.screenshot_url,
      });
      this.applySessionState(state);
      this.suggestions = await this.api.suggestions(this.sessionId);
    });
  }

  async fallback(activity: string, component: string, action: string): Promise<void> {
    await this.mutate(async () => {
      if (!this.sessionId) throw new Error('no open session');
      const state = await this.api.fallbackStep(this.sessionId, activity, component, action);
      this.steps.push({
        index: this.steps.length + 1,
        component,
        activity,
        action,
        verified: false,
      });
      this.applySessionState(state);
      this.suggestions = await this.api.suggestions(this.sessionId);
    });
  }

  async undo(): Promise<void> {
    await this.mutate(async () => {
      if (!this.sessionId) throw new Error('no open session');
      const state = await this.api.undoStep(this.sessionId);
      this.steps.pop();
      this.applySessionState(state);
      this.suggestions = await this.api.suggestions(this.sessionId);
    });
  }

  async finalize(): Promise<void> {
    if (!this.title.trim()) {
      this.error = 'A report title is required.';
      this.notify();
      return;
    }
    await this.mutate(async () => {
      if (!this.sessionId) throw new Error('no open session');
      const result = await this.api.finalize(this.sessionId, this.title, this.description);
      this.reportId = result.report_id;
    });
  }
}
