import { ApiError, TriageApi } from './api';
import type { QueueFilters } from './api';
import { renderBanner, renderCaseDetail, renderDashboard, renderNotice, renderQueue } from './render';
import type { CaseDetail, MetaInfo } from './types';

type Screen = { kind: 'queue' } | { kind: 'case'; caseId: string } | { kind: 'dashboard' };

// Screen controller: fetches, renders, and wires events. All domain data
// comes from the API; this file only moves it onto the page.
export class App {
  private filters: QueueFilters = {};
  private screen: Screen = { kind: 'queue' };
  private meta: MetaInfo | null = null;
  private notice: string | null = null;
  private current: CaseDetail | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: TriageApi,
  ) {
    root.addEventListener('click', (event) => this.onClick(event));
    root.addEventListener('submit', (event) => this.onSubmit(event));
  }

  async start(): Promise<void> {
    await this.showQueue();
  }

  async showQueue(): Promise<void> {
    this.screen = { kind: 'queue' };
    await this.load(async () => {
      const page = await this.api.listCases(this.filters);
      this.root.innerHTML = this.noticeHtml() + renderQueue(page, this.filters);
    });
  }

  async showCase(caseId: string): Promise<void> {
    this.screen = { kind: 'case', caseId };
    await this.load(async () => {
      const [detail, meta] = await Promise.all([this.api.getCase(caseId), this.metaInfo()]);
      this.renderCase(detail, meta);
    });
  }

  async showDashboard(): Promise<void> {
    this.screen = { kind: 'dashboard' };
    await this.load(async () => {
      const [addressability, agreement, stats] = await Promise.all([
        this.api.addressability(),
        this.api.agreement(),
        this.api.stats(),
      ]);
      this.root.innerHTML = this.noticeHtml() + renderDashboard(addressability, agreement, stats);
    });
  }

  private async metaInfo(): Promise<MetaInfo> {
    if (!this.meta) {
      this.meta = await this.api.meta();
    }
    return this.meta;
  }

  private renderCase(detail: CaseDetail, meta: MetaInfo): void {
    this.current = detail;
    this.root.innerHTML = this.noticeHtml() + renderCaseDetail(detail, meta);
  }

  private noticeHtml(): string {
    const html = this.notice ? renderNotice(this.notice) : '';
    this.notice = null;
    return html;
  }

  /** Run a loader; on failure show a banner with a retry affordance. */
  private async load(loader: () => Promise<void>): Promise<void> {
    try {
      await loader();
    } catch (error) {
      const message =
        error instanceof ApiError
          ? `Service error: ${error.detail}`
          : 'Service unreachable.';
      this.root.innerHTML = renderBanner(message, true);
    }
  }

  private refresh(): Promise<void> {
    switch (this.screen.kind) {
      case 'queue':
        return this.showQueue();
      case 'case':
        return this.showCase(this.screen.caseId);
      case 'dashboard':
        return this.showDashboard();
    }
  }

  private onClick(event: Event): void {
    const target = event.target as HTMLElement | null;
    if (!target) return;
    if (target.dataset.role === 'retry') {
      void this.refresh();
      return;
    }
    if (target.dataset.role === 'back') {
      void this.showQueue();
      return;
    }
    const row = target.closest<HTMLElement>('.case-row');
    if (row?.dataset.caseId) {
      void this.showCase(row.dataset.caseId);
    }
  }

  private onSubmit(event: Event): void {
    const form = event.target as HTMLFormElement | null;
    if (!form) return;
    event.preventDefault();
    if (form.dataset.role === 'queue-filters') {
      const data = new FormData(form);
      this.filters = {
        state: String(data.get('state') ?? '') || undefined,
        app: String(data.get('app') ?? '') || undefined,
        store: String(data.get('store') ?? '') || undefined,
      };
      void this.showQueue();
      return;
    }
    if (form.dataset.role === 'decision') {
      void this.submitDecision(form);
    }
  }

  buildPayload(form: HTMLFormElement, detail?: CaseDetail): Record<string, unknown> {
    const action = form.dataset.action ?? '';
    const data = new FormData(form);
    const value = (name: string) => String(data.get(name) ?? '');
    switch (action) {
      case 'confirm-need':
        return { kind: value('kind') };
      case 'reject-need':
      case 'mark-unresolvable': {
        const note = value('note');
        return note ? { note } : {};
      }
      case 'confirm-category':
        return { category: value('category') };
      case 'confirm-team':
        return { team: value('team') };
      case 'resolve-case': {
        const payload: Record<string, unknown> = { resolution: value('resolution') };
        const index = value('source_index');
        if (index !== '' && detail?.source_candidates) {
          payload.source = detail.source_candidates[Number(index)];
        }
        const text = value('response_text');
        if (text) payload.response_text = text;
        return payload;
      }
      default:
        return {};
    }
  }

  private async submitDecision(form: HTMLFormElement): Promise<void> {
    const caseId = form.dataset.caseId ?? '';
    const action = form.dataset.action ?? '';
    const version = Number(form.dataset.version ?? '0');
    const payload = this.buildPayload(form, this.current ?? undefined);
    try {
      const result = await this.api.decide(caseId, version, action, payload);
      if (!result.ok) {
        // conflict: keep the reviewer on the case with the fresh state
        this.notice = `Case changed while you were deciding (${result.reason}); reloaded.`;
        this.renderCase(result.case, await this.metaInfo());
        return;
      }
      this.renderCase(result.case, await this.metaInfo());
    } catch (error) {
      const message =
        error instanceof ApiError ? `Decision rejected: ${error.detail}` : 'Service unreachable.';
      this.root.innerHTML = renderBanner(message, true);
    }
  }
}
