import { describe, expect, it } from 'vitest';

import {
  escapeHtml,
  highlightSpans,
  renderBanner,
  renderCaseDetail,
  renderDashboard,
  renderQueue,
} from '../src/render';
import type {
  AddressabilityReport,
  AgreementReport,
  CaseDetail,
  MetaInfo,
  QueuePage,
  StatsReport,
} from '../src/types';
import addressability from './fixtures/addressability.json';
import agreement from './fixtures/agreement.json';
import caseAnswered from './fixtures/case_answered.json';
import caseAuto from './fixtures/case_auto_detected.json';
import caseSourceProposed from './fixtures/case_source_proposed.json';
import meta from './fixtures/meta.json';
import queuePage from './fixtures/queue.json';
import stats from './fixtures/stats.json';

const metaInfo = meta as unknown as MetaInfo;
const autoCase = caseAuto as unknown as CaseDetail;
const proposedCase = caseSourceProposed as unknown as CaseDetail;
const answeredCase = caseAnswered as unknown as CaseDetail;

function unescapeHtml(html: string): string {
  return html
    .replace(/&lt;/g, '<')
    .replace(/&gt;/g, '>')
    .replace(/&quot;/g, '"')
    .replace(/&#39;/g, "'")
    .replace(/&amp;/g, '&');
}

function formActions(html: string): string[] {
  return [...html.matchAll(/data-role="decision" data-action="([a-z-]+)"/g)].map((m) => m[1]);
}

describe('queue screen', () => {
  it('renders one row per served case with the served values', () => {
    const html = renderQueue(queuePage as unknown as QueuePage);
    const rows = html.match(/class="case-row"/g) ?? [];
    expect(rows.length).toBe((queuePage as QueuePage).cases.length);
    for (const served of (queuePage as unknown as QueuePage).cases) {
      expect(html).toContain(`data-case-id="${served.case_id}"`);
      expect(html).toContain(escapeHtml(served.snippet));
      expect(html).toContain(`v${served.version}`);
    }
    expect(html).toContain(`${(queuePage as QueuePage).total} case(s)`);
  });

  it('shows an empty state when no cases match', () => {
    const html = renderQueue({ cases: [], total: 0, page: 1, page_size: 50 });
    expect(html).toContain('No cases match');
  });

  it('keeps the active filter selected', () => {
    const html = renderQueue({ cases: [], total: 0, page: 1, page_size: 50 }, { state: 'answered' });
    expect(html).toContain('<option value="answered" selected>');
  });

  it('escapes review snippets', () => {
    const page: QueuePage = {
      cases: [{ ...(queuePage as QueuePage).cases[0], snippet: '<script>alert(1)</script>' }],
      total: 1,
      page: 1,
      page_size: 50,
    };
    const html = renderQueue(page);
    expect(html).not.toContain('<script>alert(1)</script>');
    expect(html).toContain('&lt;script&gt;');
  });
});

describe('span highlighting', () => {
  it('wraps every served hit and keeps the text byte-identical', () => {
    const html = highlightSpans(autoCase.review_text, autoCase.filter_hits);
    const stripped = unescapeHtml(html.replace(/<\/?mark>/g, ''));
    expect(stripped).toBe(autoCase.review_text);
    for (const hit of autoCase.filter_hits) {
      expect(html).toContain(`<mark>${escapeHtml(hit.text)}</mark>`);
      const [start, end] = hit.span;
      expect(autoCase.review_text.slice(start, end)).toBe(hit.text);
    }
  });

  it('merges overlapping spans without losing text', () => {
    const text = 'how to understand how';
    const hits = [
      { pattern: 'how', kind: 'potential', span: [0, 3] as [number, number], text: 'how' },
      {
        pattern: 'how to understand',
        kind: 'explicit',
        span: [0, 17] as [number, number],
        text: 'how to understand',
      },
      { pattern: 'how', kind: 'potential', span: [18, 21] as [number, number], text: 'how' },
    ];
    const html = highlightSpans(text, hits);
    expect(unescapeHtml(html.replace(/<\/?mark>/g, ''))).toBe(text);
  });
});

describe('case detail screen', () => {
  it('offers exactly the served allowed actions on an auto-detected case', () => {
    const html = renderCaseDetail(autoCase, metaInfo);
    expect(formActions(html).sort()).toEqual([...autoCase.allowed_actions].sort());
    expect(html).not.toContain('data-action="confirm-team"');
    expect(html).not.toContain('data-action="resolve-case"');
  });

  it('sends the displayed version with every decision form', () => {
    const html = renderCaseDetail(proposedCase, metaInfo);
    expect(html).toContain(`<span class="version" data-role="version">v${proposedCase.version}</span>`);
    const versions = [...html.matchAll(/data-version="(\d+)"/g)].map((m) => Number(m[1]));
    expect(versions.length).toBeGreaterThan(0);
    expect(new Set(versions)).toEqual(new Set([proposedCase.version]));
  });

  it('renders ranked teams with the served share badges', () => {
    const html = renderCaseDetail(proposedCase, metaInfo);
    for (const entry of proposedCase.team_ranking_detail ?? []) {
      expect(html).toContain(entry.team);
      if (entry.percent !== null) {
        expect(html).toContain(`<span class="badge">${entry.percent}%</span>`);
      }
    }
  });

  it('renders source candidates with served tier labels and scores', () => {
    const html = renderCaseDetail(proposedCase, metaInfo);
    for (const candidate of proposedCase.source_candidates ?? []) {
      expect(html).toContain(`tier-${candidate.tier}`);
      expect(html).toContain(String(candidate.score));
    }
    expect(formActions(html).sort()).toEqual(['mark-unresolvable', 'resolve-case']);
  });

  it('groups the category override options by supercategory', () => {
    const confirmable = { ...autoCase, allowed_actions: ['confirm-category'] } as CaseDetail;
    const html = renderCaseDetail(confirmable, metaInfo);
    expect(html).toContain('<optgroup label="System Behavior">');
    expect(html).toContain('<optgroup label="Standalone">');
    for (const sub of metaInfo.taxonomy.subcategories) {
      expect(html).toContain(`<option value="${escapeHtml(sub)}">`);
    }
  });

  it('terminal cases expose no decision forms', () => {
    const html = renderCaseDetail(answeredCase, metaInfo);
    expect(formActions(html)).toEqual([]);
    expect(html).toContain('terminal');
  });

  it('shows the full served audit trail', () => {
    const html = renderCaseDetail(answeredCase, metaInfo);
    for (const event of answeredCase.audit) {
      expect(html).toContain(`v${event.resulting_version}`);
      expect(html).toContain(event.action);
    }
  });
});

describe('dashboard screen', () => {
  const addressabilityReport = addressability as unknown as AddressabilityReport;
  const agreementReport = agreement as unknown as AgreementReport;
  const statsReport = stats as unknown as StatsReport;

  it('displays the served addressability percentage verbatim', () => {
    const html = renderDashboard(addressabilityReport, agreementReport, statsReport);
    expect(html).toContain(`<p class="big-number">88%</p>`);
    expect(html).toContain('139 of 158 confirmed needs resolved');
  });

  it('displays the served per-rank hit rates verbatim', () => {
    const html = renderDashboard(addressabilityReport, agreementReport, statsReport);
    expect(html).toContain(`overall ${addressabilityReport.team_hit_rate?.overall}`);
    expect(html).toContain('rank 1: 0.6');
    expect(html).toContain('rank 2: 0.2');
  });

  it('labels kappa values with the served interpretation bands', () => {
    const served: AgreementReport = {
      no_data: false,
      groups: [
        {
          raters: ['g1', 'g2'],
          n_units: 25,
          statistic: 'cohen',
          category_kappa: 0.61,
          category_band: 'Substantial',
          supercategory_kappa: 0.39,
          supercategory_band: 'Fair',
          team_kappa: 0.558,
          team_band: 'Moderate',
        },
      ],
    };
    const html = renderDashboard(addressabilityReport, served, statsReport);
    expect(html).toContain('0.61');
    expect(html).toContain('<span class="badge band">Substantial</span>');
    expect(html).toContain('0.39');
    expect(html).toContain('<span class="badge band">Fair</span>');
    expect(html).toContain('0.558');
    expect(html).toContain('<span class="badge band">Moderate</span>');
  });

  it('renders the real agreement fixture exactly as served', () => {
    const html = renderDashboard(addressabilityReport, agreementReport, statsReport);
    for (const group of agreementReport.groups) {
      expect(html).toContain(String(group.category_kappa));
      expect(html).toContain(`<span class="badge band">${group.category_band}</span>`);
    }
  });

  it('shows no-data markers when reports are empty', () => {
    const empty: AddressabilityReport = {
      ...addressabilityReport,
      no_data: true,
      resolved_percent_display: null,
      team_hit_rate: null,
    };
    const html = renderDashboard(empty, { groups: [], no_data: true }, statsReport);
    expect((html.match(/no data/g) ?? []).length).toBeGreaterThanOrEqual(3);
  });

  it('renders the served per-app stats table', () => {
    const html = renderDashboard(addressabilityReport, agreementReport, statsReport);
    for (const row of statsReport.rows) {
      expect(html).toContain(escapeHtml(row.app_id));
    }
  });
});

describe('banner', () => {
  it('offers a retry affordance when the service is unreachable', () => {
    const html = renderBanner('Service unreachable.', true);
    expect(html).toContain('Service unreachable.');
    expect(html).toContain('data-role="retry"');
  });
});
