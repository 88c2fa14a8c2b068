import type {
  AddressabilityReport,
  AgreementReport,
  CaseDetail,
  CaseSummary,
  MatchHit,
  MetaInfo,
  QueuePage,
  SourceCandidate,
  StatsReport,
} from './types';

// All functions here are pure string builders so the display logic is
// testable without a DOM. Every number and label comes straight from the
// API payloads; nothing is recomputed client-side.

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

export const ACTION_LABELS: Record<string, string> = {
  'confirm-need': 'Confirm need',
  'reject-need': 'Reject (no need)',
  'confirm-category': 'Confirm category',
  'confirm-team': 'Confirm team',
  'resolve-case': 'Resolve',
  'mark-unresolvable': 'Mark unresolvable',
};

const QUEUE_STATES = [
  '',
  'ingested',
  'auto-detected',
  'need-confirmed',
  'categorized',
  'team-assigned',
  'source-proposed',
  'answered',
  'no-need',
  'unresolvable',
];

/** Wrap match spans in <mark>; the text content stays byte-identical. */
export function highlightSpans(text: string, hits: MatchHit[]): string {
  const spans = hits
    .map((h) => h.span)
    .filter(([start, end]) => start >= 0 && end <= text.length && start < end)
    .sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  const merged: [number, number][] = [];
  for (const [start, end] of spans) {
    const last = merged[merged.length - 1];
    if (last && start <= last[1]) {
      last[1] = Math.max(last[1], end);
    } else {
      merged.push([start, end]);
    }
  }
  let html = '';
  let cursor = 0;
  for (const [start, end] of merged) {
    html += escapeHtml(text.slice(cursor, start));
    html += `<mark>${escapeHtml(text.slice(start, end))}</mark>`;
    cursor = end;
  }
  html += escapeHtml(text.slice(cursor));
  return html;
}

function stateChip(state: string): string {
  return `<span class="chip state-${escapeHtml(state)}">${escapeHtml(state)}</span>`;
}

export interface QueueFilterValues {
  state?: string;
  app?: string;
  store?: string;
}

export function renderQueue(page: QueuePage, filters: QueueFilterValues = {}): string {
  const options = QUEUE_STATES.map((s) => {
    const selected = (filters.state ?? '') === s ? ' selected' : '';
    const label = s === '' ? 'all states' : s;
    return `<option value="${s}"${selected}>${label}</option>`;
  }).join('');
  const rows = page.cases
    .map(
      (c: CaseSummary) => `
    <tr class="case-row" data-case-id="${escapeHtml(c.case_id)}">
      <td>${stateChip(c.state)}</td>
      <td>${escapeHtml(c.app_id)}</td>
      <td>${escapeHtml(c.store)}</td>
      <td class="num">${c.rating}</td>
      <td>${escapeHtml(c.filter_label ?? '')}</td>
      <td class="snippet">${escapeHtml(c.snippet)}</td>
      <td class="num">v${c.version}</td>
    </tr>`,
    )
    .join('');
  const empty = `<p class="empty">No cases match the current filter.</p>`;
  return `
  <section class="queue">
    <form class="filters" data-role="queue-filters">
      <label>State <select name="state">${options}</select></label>
      <label>App <input name="app" value="${escapeHtml(filters.app ?? '')}" placeholder="app id"></label>
      <label>Store <select name="store">
        <option value="">all stores</option>
        <option value="google-play"${filters.store === 'google-play' ? ' selected' : ''}>google-play</option>
        <option value="apple-app-store"${filters.store === 'apple-app-store' ? ' selected' : ''}>apple-app-store</option>
      </select></label>
      <button type="submit">Apply</button>
    </form>
    <p class="total">${page.total} case(s)</p>
    ${
      page.cases.length
        ? `<table class="queue-table">
      <thead><tr><th>State</th><th>App</th><th>Store</th><th>Rating</th><th>Filter label</th><th>Review</th><th>Version</th></tr></thead>
      <tbody>${rows}</tbody></table>`
        : empty
    }
  </section>`;
}

function groupedCategoryOptions(meta: MetaInfo, suggested: string[]): string {
  const groups = new Map<string, string[]>();
  for (const sub of meta.taxonomy.subcategories) {
    const parent = meta.taxonomy.rollup[sub] ?? sub;
    const group = meta.taxonomy.standalone.includes(sub) ? 'Standalone' : parent;
    if (!groups.has(group)) groups.set(group, []);
    groups.get(group)!.push(sub);
  }
  let html = '';
  for (const [group, subs] of groups) {
    const options = subs
      .map((sub) => {
        const mark = suggested.includes(sub) ? ' (suggested)' : '';
        return `<option value="${escapeHtml(sub)}">${escapeHtml(sub)}${mark}</option>`;
      })
      .join('');
    html += `<optgroup label="${escapeHtml(group)}">${options}</optgroup>`;
  }
  return html;
}

function decisionForm(detail: CaseDetail, action: string, body: string): string {
  // the version rides along with every decision for optimistic concurrency
  return `
  <form class="decision" data-role="decision" data-action="${escapeHtml(action)}"
        data-case-id="${escapeHtml(detail.case_id)}" data-version="${detail.version}">
    <h4>${escapeHtml(ACTION_LABELS[action] ?? action)}</h4>
    ${body}
    <button type="submit">${escapeHtml(ACTION_LABELS[action] ?? action)}</button>
  </form>`;
}

function decisionForms(detail: CaseDetail, meta: MetaInfo): string {
  const forms: string[] = [];
  const allowed = detail.allowed_actions;
  if (allowed.includes('confirm-need')) {
    forms.push(
      decisionForm(
        detail,
        'confirm-need',
        `<label>Kind <select name="kind">
          <option value="explicit">explicit</option>
          <option value="implicit">implicit</option>
        </select></label>`,
      ),
    );
  }
  if (allowed.includes('reject-need')) {
    forms.push(
      decisionForm(detail, 'reject-need', `<label>Note <input name="note"></label>`),
    );
  }
  if (allowed.includes('confirm-category')) {
    const suggested = (detail.suggestion ?? []).map(([cat]) => cat);
    forms.push(
      decisionForm(
        detail,
        'confirm-category',
        `<label>Category <select name="category">${groupedCategoryOptions(meta, suggested)}</select></label>`,
      ),
    );
  }
  if (allowed.includes('confirm-team')) {
    const ranked = detail.team_ranking ?? [];
    const options = meta.teams
      .map((t) => {
        const rank = ranked.indexOf(t.name);
        const mark = rank >= 0 ? ` (rank ${rank + 1})` : ' (override)';
        return `<option value="${escapeHtml(t.name)}">${escapeHtml(t.name)}${mark}</option>`;
      })
      .join('');
    forms.push(
      decisionForm(detail, 'confirm-team', `<label>Team <select name="team">${options}</select></label>`),
    );
  }
  if (allowed.includes('resolve-case')) {
    const candidates = detail.source_candidates ?? [];
    const sourceOptions = [`<option value="">none (draft new response)</option>`]
      .concat(
        candidates.map(
          (c, i) =>
            `<option value="${i}">${escapeHtml(c.tier)} ${escapeHtml(c.ref ?? 'new')} (${c.score})</option>`,
        ),
      )
      .join('');
    forms.push(
      decisionForm(
        detail,
        'resolve-case',
        `<label>Resolution <select name="resolution">
          <option value="answered">answered</option>
          <option value="already-solved">already solved</option>
          <option value="will-be-solved">will be solved</option>
        </select></label>
        <label>Source <select name="source_index">${sourceOptions}</select></label>
        <label>Response <textarea name="response_text" rows="3"></textarea></label>`,
      ),
    );
  }
  if (allowed.includes('mark-unresolvable')) {
    forms.push(
      decisionForm(detail, 'mark-unresolvable', `<label>Note <input name="note"></label>`),
    );
  }
  if (!forms.length) {
    return `<p class="terminal-note">This case is terminal; no actions remain.</p>`;
  }
  return forms.join('\n');
}

function candidateRows(candidates: SourceCandidate[]): string {
  return candidates
    .map(
      (c) => `
    <tr><td class="num">${c.rank}</td><td><span class="chip tier-${escapeHtml(c.tier)}">${escapeHtml(
        c.tier,
      )}</span></td><td>${escapeHtml(c.ref ?? 'draft new response')}</td><td class="num">${c.score}</td></tr>`,
    )
    .join('');
}

export function renderCaseDetail(detail: CaseDetail, meta: MetaInfo): string {
  const suggestion = detail.suggestion
    ? detail.suggestion
        .map(([cat, score]) => `<li>${escapeHtml(cat)} <span class="score">${score}</span></li>`)
        .join('')
    : '';
  const tags = detail.suggestion_tags.length
    ? `<p class="tags">tags: ${detail.suggestion_tags.map(escapeHtml).join(', ')}</p>`
    : '';
  const ranking = (detail.team_ranking_detail ?? []).length
    ? `<ol class="team-ranking">${(detail.team_ranking_detail ?? [])
        .map(
          (entry) =>
            `<li>${escapeHtml(entry.team)}${
              entry.percent !== null ? ` <span class="badge">${entry.percent}%</span>` : ''
            }</li>`,
        )
        .join('')}</ol>`
    : '';
  const candidates = detail.source_candidates
    ? `<table class="candidates"><thead><tr><th>Rank</th><th>Tier</th><th>Source</th><th>Score</th></tr></thead>
       <tbody>${candidateRows(detail.source_candidates)}</tbody></table>`
    : '';
  const audit = detail.audit
    .map(
      (e) => `
    <li><code>v${e.resulting_version}</code> ${escapeHtml(e.action)} by
      ${escapeHtml(e.actor.kind === 'human' ? (e.actor.id ?? 'human') : 'system')}
      &rarr; ${stateChip(e.resulting_state)}
      <time>${escapeHtml(e.timestamp)}</time></li>`,
    )
    .join('');
  return `
  <section class="case-detail" data-case-id="${escapeHtml(detail.case_id)}">
    <header>
      <button data-role="back">&larr; queue</button>
      <h2>${escapeHtml(detail.case_id)}</h2>
      ${stateChip(detail.state)}
      <span class="version" data-role="version">v${detail.version}</span>
    </header>
    <dl class="meta">
      <dt>App</dt><dd>${escapeHtml(detail.app_id)} (${escapeHtml(detail.store)})</dd>
      <dt>Rating</dt><dd>${detail.rating}</dd>
      <dt>Language</dt><dd>${escapeHtml(detail.language)}</dd>
      <dt>Filter label</dt><dd>${escapeHtml(detail.filter_label ?? 'none')}</dd>
      <dt>Confirmed label</dt><dd>${escapeHtml(detail.confirmed_label ?? '-')}</dd>
      <dt>Category</dt><dd>${escapeHtml(detail.confirmed_category ?? '-')}</dd>
      <dt>Team</dt><dd>${escapeHtml(detail.confirmed_team ?? '-')}${
        detail.team_override ? ' <span class="badge override">override</span>' : ''
      }</dd>
      <dt>Resolution</dt><dd>${escapeHtml(detail.resolution ?? '-')}</dd>
    </dl>
    <article class="review-text">${highlightSpans(detail.review_text, detail.filter_hits)}</article>
    ${suggestion ? `<h3>Suggested categories</h3><ol class="suggestion">${suggestion}</ol>` : ''}
    ${tags}
    ${ranking ? `<h3>Ranked teams</h3>${ranking}` : ''}
    ${candidates ? `<h3>Source candidates</h3>${candidates}` : ''}
    <h3>Decisions</h3>
    <div class="decisions">${decisionForms(detail, meta)}</div>
    <h3>Audit trail</h3>
    <ol class="audit">${audit}</ol>
  </section>`;
}

export function renderDashboard(
  addressability: AddressabilityReport,
  agreement: AgreementReport,
  stats: StatsReport,
): string {
  const resolved =
    addressability.no_data || addressability.resolved_percent_display === null
      ? `<p class="empty">no data</p>`
      : `<p class="big-number">${addressability.resolved_percent_display}%</p>
         <p>${addressability.resolved} of ${addressability.confirmed_terminal} confirmed needs resolved</p>`;
  const fractions = Object.entries(addressability.by_resolution)
    .map(
      ([name, count]) =>
        `<tr><td>${escapeHtml(name)}</td><td class="num">${count}</td>
         <td class="num">${addressability.fractions[name] ?? '-'}</td></tr>`,
    )
    .join('');
  const hitRate = addressability.team_hit_rate
    ? `<p>overall ${addressability.team_hit_rate.overall}</p>
       <ul>${Object.entries(addressability.team_hit_rate.per_rank)
         .map(([rank, frac]) => `<li>rank ${escapeHtml(rank)}: ${frac}</li>`)
         .join('')}</ul>`
    : `<p class="empty">no data</p>`;
  const agreementRows = agreement.no_data
    ? `<p class="empty">no data</p>`
    : `<table><thead><tr><th>Raters</th><th>Units</th><th>Statistic</th>
        <th>Category &kappa;</th><th>Supercategory &kappa;</th><th>Team &kappa;</th></tr></thead><tbody>${agreement.groups
          .map(
            (g) => `
      <tr>
        <td>${g.raters.map(escapeHtml).join(', ')}</td>
        <td class="num">${g.n_units}</td>
        <td>${escapeHtml(g.statistic)}</td>
        <td>${g.category_kappa ?? '-'} <span class="badge band">${escapeHtml(g.category_band ?? '')}</span></td>
        <td>${g.supercategory_kappa ?? '-'} <span class="badge band">${escapeHtml(
          g.supercategory_band ?? '',
        )}</span></td>
        <td>${g.team_kappa ?? '-'} <span class="badge band">${escapeHtml(g.team_band ?? '')}</span></td>
      </tr>`,
          )
          .join('')}</tbody></table>`;
  const statsRows = stats.rows
    .map(
      (row) => `
    <tr><td>${escapeHtml(row.app_id)}</td><td>${escapeHtml(row.store)}</td>
    <td class="num">${row.explicit}</td><td class="num">${row.implicit}</td>
    <td class="num">${row.potential}</td><td class="num">${row.none}</td></tr>`,
    )
    .join('');
  return `
  <section class="dashboard">
    <div class="card"><h3>Addressability</h3>${resolved}
      <table><thead><tr><th>Resolution</th><th>Count</th><th>Fraction</th></tr></thead>
      <tbody>${fractions}</tbody></table>
      <p>in flight: ${addressability.in_flight}, no need: ${addressability.no_need}</p>
    </div>
    <div class="card"><h3>Team hit rate</h3>${hitRate}</div>
    <div class="card"><h3>Inter-rater agreement</h3>${agreementRows}</div>
    <div class="card"><h3>Detected needs per app</h3>
      <table><thead><tr><th>App</th><th>Store</th><th>Explicit</th><th>Implicit</th><th>Potential</th><th>None</th></tr></thead>
      <tbody>${statsRows}</tbody></table>
    </div>
  </section>`;
}

export function renderBanner(message: string, retryable: boolean): string {
  return `
  <div class="banner error" data-role="banner">
    <span>${escapeHtml(message)}</span>
    ${retryable ? `<button data-role="retry">Retry</button>` : ''}
  </div>`;
}

export function renderNotice(message: string): string {
  return `<div class="banner notice" data-role="notice">${escapeHtml(message)}</div>`;
}
