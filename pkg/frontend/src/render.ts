// HTML-string renderers for the three wizard panes. DOM-free so they can be
// exercised in plain node tests; main.ts mounts the strings and paints the
// screenshot canvases afterwards.

import { SuggestionInfo, TargetInfo, VariantInfo } from './api.js';
import { ConfirmedStepView, WizardStore } from './state.js';

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function targetLabel(target: TargetInfo): string {
  if (target.kind === 'state') return `state ${target.state}`;
  if (target.kind === 'crashed') return `crash: ${target.message ?? ''}`;
  return 'app exits';
}

export function renderSuggestionList(suggestions: SuggestionInfo[], selected: number | null): string {
  if (suggestions.length === 0) {
    return '<p class="notice">Bug path complete: no further actions from here.</p>';
  }
  const items = suggestions.map((s, i) => {
    const cls = i === selected ? 'suggestion selected' : 'suggestion';
    const count = s.variants.length === 1 ? '1 screenshot' : `${s.variants.length} screenshots`;
    return `<li class="${cls}" data-suggestion="${i}">` +
      `<code>${escapeHtml(s.component)}</code> on <code>${escapeHtml(s.activity)}</code>` +
      ` <span class="action">${escapeHtml(s.action)}</span>` +
      ` <span class="variants">${count}</span></li>`;
  });
  return `<ul class="suggestions">${items.join('')}</ul>`;
}

export function renderVariantGrid(suggestion: SuggestionInfo | null): string {
  if (suggestion === null) {
    return '<p class="notice">Select a suggestion to verify it against a screenshot.</p>';
  }
  const cells = suggestion.variants.map((v: VariantInfo) =>
    `<figure class="variant" data-source="${escapeHtml(v.source_state)}" ` +
    `data-shot="${escapeHtml(v.screenshot_url)}">` +
    `<canvas width="270" height="480"></canvas>` +
    `<figcaption>from ${escapeHtml(v.source_state)} &rarr; ${escapeHtml(targetLabel(v.target))}` +
    `</figcaption></figure>`);
  return `<div class="variant-grid">${cells.join('')}</div>`;
}

export function renderPlaceholder(): string {
  return '<div class="broken-shot">screenshot unavailable</div>';
}

export function renderStepList(steps: ConfirmedStepView[]): string {
  if (steps.length === 0) return '<p class="notice">No steps confirmed yet.</p>';
  const items = steps.map((step) => {
    const badge = step.verified ? '' : ' <span class="badge">unverified</span>';
    return `<li>Tap <code>${escapeHtml(step.component)}</code> on ` +
      `<code>${escapeHtml(step.activity)}</code>${badge}</li>`;
  });
  return `<ol class="steps">${items.join('')}</ol>`;
}

export function renderEstimate(estimateSize: number | null, degraded: boolean): string {
  if (estimateSize === null) return '<span class="estimate">no session</span>';
  const note = degraded ? ' (degraded)' : '';
  const states = estimateSize === 1 ? 'candidate state' : 'candidate states';
  return `<span class="estimate">${estimateSize} ${states}${note}</span>`;
}

export function renderDraft(store: WizardStore): string {
  const lines: string[] = [];
  lines.push(`<h2>${store.title.trim() ? escapeHtml(store.title) : '(untitled report)'}</h2>`);
  if (store.description.trim()) lines.push(`<p>${escapeHtml(store.description)}</p>`);
  if (store.degraded) {
    lines.push('<p class="badge">Contains unverified steps; the outcome will not be recorded.</p>');
  }
  const steps = store.steps.map((step: ConfirmedStepView) => {
    const shot = step.verified ? '' : ' (no screenshot available)';
    return `<li>Tap <code>${escapeHtml(step.component)}</code> on ` +
      `<code>${escapeHtml(step.activity)}</code>${shot}</li>`;
  });
  lines.push(steps.length ? `<ol>${steps.join('')}</ol>` : '<p>(no steps)</p>');
  if (store.reportId) {
    lines.push(`<p class="done">Report <code>${escapeHtml(store.reportId)}</code> filed.</p>`);
  }
  return lines.join('\n');
}

export function renderError(error: string | null): string {
  return error ? `<div class="error">${escapeHtml(error)}</div>` : '';
}
