// Typed client for the reporting service. Every method maps to exactly one
// endpoint and returns the server's JSON untouched.

export interface TargetInfo {
  kind: 'state' | 'crashed' | 'exited';
  state?: string;
  message?: string;
}

export interface VariantInfo {
  source_state: string;
  target: TargetInfo;
  screenshot_url: string;
}

export interface SuggestionInfo {
  component: string;
  activity: string;
  action: string;
  variants: VariantInfo[];
}

export interface SessionState {
  estimate_size: number;
  degraded: boolean;
}

export interface OpenSessionResponse extends SessionState {
  session_id: string;
}

export interface AppInfo {
  app_id: string;
  version: string;
  states: number;
  edges: number;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`${status}: ${detail}`);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.detail === 'string') detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  return new ApiError(response.status, detail);
}

export class ReportingApi {
  constructor(private baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown, method = 'POST'): Promise<T> {
    return this.request<T>(path, {
      method,
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  appInfo(): Promise<AppInfo> {
    return this.request('/app');
  }

  openSession(assumeLaunch: boolean): Promise<OpenSessionResponse> {
    return this.post('/sessions', { assume_launch: assumeLaunch });
  }

  suggestions(sessionId: string): Promise<SuggestionInfo[]> {
    return this.request(`/sessions/${sessionId}/suggestions`);
  }

  confirmStep(sessionId: string, component: string, action: string,
              sourceState: string): Promise<SessionState> {
    return this.post(`/sessions/${sessionId}/steps`,
                     { component, action, source_state: sourceState });
  }

  fallbackStep(sessionId: string, activity: string, component: string,
               action: string): Promise<SessionState> {
    return this.post(`/sessions/${sessionId}/fallback-steps`, { activity, component, action });
  }

  async undoStep(sessionId: string): Promise<SessionState> {
    const response = await fetch(`${this.baseUrl}/sessions/${sessionId}/steps/last`,
                                 { method: 'DELETE' });
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as SessionState;
  }

  finalize(sessionId: string, title: string, description: string): Promise<{ report_id: string }> {
    return this.post(`/sessions/${sessionId}/finalize`, { title, description });
  }

  async fetchScreenshot(url: string): Promise<Uint8Array> {
    const response = await fetch(this.baseUrl + url);
    if (!response.ok) throw await parseError(response);
    return new Uint8Array(await response.arrayBuffer());
  }

  async reportMarkdown(reportId: string): Promise<string> {
    const response = await fetch(`${this.baseUrl}/reports/${reportId}/markdown`);
    if (!response.ok) throw await parseError(response);
    return response.text();
  }
}
