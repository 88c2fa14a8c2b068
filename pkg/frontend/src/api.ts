import type {
  AddressabilityReport,
  AgreementReport,
  CaseDetail,
  DecideResult,
  MetaInfo,
  QueuePage,
  StatsReport,
} from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
  }
}

export interface QueueFilters {
  state?: string;
  app?: string;
  store?: string;
  page?: number;
  page_size?: number;
}

// Thin typed client over the workflow service. Every decision carries the
// case version it was made against; a 409 answer reloads the case instead
// of guessing.
export class TriageApi {
  constructor(
    private readonly actor: string,
    private readonly base: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, {
      ...init,
      headers: {
        'Content-Type': 'application/json',
        'X-Actor': this.actor,
        ...(init?.headers ?? {}),
      },
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new ApiError(response.status, detail || response.statusText);
    }
    return (await response.json()) as T;
  }

  listCases(filters: QueueFilters = {}): Promise<QueuePage> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(filters)) {
      if (value !== undefined && value !== '') params.set(key, String(value));
    }
    const query = params.toString();
    return this.request<QueuePage>(`/cases${query ? `?${query}` : ''}`);
  }

  getCase(caseId: string): Promise<CaseDetail> {
    return this.request<CaseDetail>(`/cases/${caseId}`);
  }

  async decide(
    caseId: string,
    version: number,
    action: string,
    payload: Record<string, unknown>,
  ): Promise<DecideResult> {
    const response = await this.fetchImpl(`${this.base}/cases/${caseId}/decision`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json', 'X-Actor': this.actor },
      body: JSON.stringify({ version, action, payload }),
    });
    if (response.status === 409) {
      // the case moved under us: reload it, never overwrite blindly
      const body = (await response.json()) as { error?: string; detail?: string };
      const fresh = await this.getCase(caseId);
      return {
        ok: false,
        conflict: true,
        reason: body.detail ?? body.error ?? 'case changed',
        case: fresh,
      };
    }
    if (!response.ok) {
      const detail = await response.text();
      throw new ApiError(response.status, detail || response.statusText);
    }
    return { ok: true, case: (await response.json()) as CaseDetail };
  }

  addressability(): Promise<AddressabilityReport> {
    return this.request<AddressabilityReport>('/reports/addressability');
  }

  agreement(): Promise<AgreementReport> {
    return this.request<AgreementReport>('/reports/agreement');
  }

  stats(): Promise<StatsReport> {
    return this.request<StatsReport>('/reports/stats');
  }

  meta(): Promise<MetaInfo> {
    return this.request<MetaInfo>('/meta');
  }
}
