// Browser entry point: wires the store to the three panes and paints the
// decoded PPM screenshots onto their canvases.

import { ReportingApi } from './api.js';
import { decodePpm } from './ppm.js';
import {
  renderDraft,
  renderError,
  renderEstimate,
  renderPlaceholder,
  renderStepList,
  renderSuggestionList,
  renderVariantGrid,
} from './render.js';
import { WizardStore } from './state.js';

const api = new ReportingApi('');
const store = new WizardStore(api);
let selectedSuggestion: number | null = null;

function $(id: string): HTMLElement {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing #${id}`);
  return element;
}

async function paintScreenshots(container: HTMLElement): Promise<void> {
  for (const figure of Array.from(container.querySelectorAll<HTMLElement>('.variant'))) {
    const url = figure.dataset.shot;
    const canvas = figure.querySelector('canvas');
    if (!url || !canvas) continue;
    try {
      const image = decodePpm(await api.fetchScreenshot(url));
      if (!image) throw new Error('malformed image');
      canvas.width = image.width;
      canvas.height = image.height;
      const ctx = canvas.getContext('2d');
      const pixels = new Uint8ClampedArray(image.rgba);  // pin to a plain ArrayBuffer for ImageData
      ctx?.putImageData(new ImageData(pixels, image.width, image.height), 0, 0);
    } catch {
      canvas.outerHTML = renderPlaceholder();
    }
  }
}

function rerender(): void {
  $('estimate').innerHTML = renderEstimate(store.estimateSize, store.degraded);
  $('error').innerHTML = renderError(store.error);
  $('suggestions').innerHTML = renderSuggestionList(store.suggestions, selectedSuggestion);
  const suggestion = selectedSuggestion === null ? null : store.suggestions[selectedSuggestion] ?? null;
  const verification = $('verification');
  verification.innerHTML = renderVariantGrid(suggestion);
  $('steps').innerHTML = renderStepList(store.steps);
  $('draft').innerHTML = renderDraft(store);
  ($('finalize') as HTMLButtonElement).disabled = store.busy || store.steps.length === 0;
  ($('undo') as HTMLButtonElement).disabled = store.busy || store.steps.length === 0;
  void paintScreenshots(verification);
}

function bind(): void {
  store.subscribe(rerender);

  $('suggestions').addEventListener('click', (event) => {
    const item = (event.target as HTMLElement).closest<HTMLElement>('[data-suggestion]');
    if (!item) return;
    selectedSuggestion = Number(item.dataset.suggestion);
    rerender();
  });

  $('verification').addEventListener('click', (event) => {
    const figure = (event.target as HTMLElement).closest<HTMLElement>('[data-source]');
    if (!figure || selectedSuggestion === null) return;
    const suggestion = store.suggestions[selectedSuggestion];
    if (!suggestion) return;
    selectedSuggestion = null;
    void store.confirm(suggestion.component, suggestion.action, figure.dataset.source ?? '');
  });

  $('undo').addEventListener('click', () => {
    selectedSuggestion = null;
    void store.undo();
  });

  $('finalize').addEventListener('click', () => void store.finalize());
  $('title').addEventListener('input', (event) => {
    store.title = (event.target as HTMLInputElement).value;
    rerender();
  });
  $('description').addEventListener('input', (event) => {
    store.description = (event.target as HTMLTextAreaElement).value;
    rerender();
  });
  $('restart').addEventListener('click', () => {
    selectedSuggestion = null;
    const assume = ($('assume-launch') as HTMLInputElement).checked;
    void store.open(assume);
  });

  void store.open(true);
}

document.addEventListener('DOMContentLoaded', bind);
