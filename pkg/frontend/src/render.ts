// Pure HTML-string renderers. Every visible state is a function of the
// latest snapshot; no session logic lives here.

import type { PageNode, Snapshot, TableView } from './types.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

const STATUS_CLASS: Record<string, string> = {
  Done: 'step-done',
  Current: 'step-current',
  Pending: 'step-pending',
};

export function statusClass(status: string): string {
  return STATUS_CLASS[status] ?? 'step-pending';
}

function nodeLabel(node: PageNode): string {
  if (node.tag === 'input') {
    const type = node.attributes['type'] ?? 'text';
    if (type === 'checkbox' || type === 'radio') {
      const mark = node.attributes['checked'] === 'true' ? '[x]' : '[ ]';
      return `<span class="widget">${mark}</span>`;
    }
    const value = node.attributes['value'] ?? '';
    return `<span class="widget textbox">${escapeHtml(value) || '&nbsp;'}</span>`;
  }
  return escapeHtml(node.text);
}

function renderNode(node: PageNode, highlightPath: string | null): string {
  const classes = [`dom-${node.tag}`];
  if (node.interactive) classes.push('interactive');
  if (node.path === highlightPath) classes.push('hl-outline');
  const collapsed = node.tag === 'menu' && node.attributes['expanded'] === 'false';
  if (collapsed) classes.push('collapsed');
  const children = collapsed
    ? ''
    : node.children.map((c) => renderNode(c, highlightPath)).join('');
  return (
    `<div class="${classes.join(' ')}" data-path="${escapeHtml(node.path)}">` +
    nodeLabel(node) +
    children +
    `</div>`
  );
}

export function renderPage(snapshot: Snapshot): string {
  if (!snapshot.page) {
    return '<div class="page-empty">No page loaded</div>';
  }
  const highlightPath =
    snapshot.highlight && snapshot.highlight.page === snapshot.page.id
      ? snapshot.highlight.path
      : null;
  return (
    `<div class="page" data-page-id="${escapeHtml(snapshot.page.id)}">` +
    renderNode(snapshot.page.tree, highlightPath) +
    `</div>`
  );
}

export function renderTable(table: TableView | null): string {
  if (!table) return '<p class="table-empty">Upload an input file to begin.</p>';
  const head = table.columns.map((c) => `<th>${escapeHtml(c)}</th>`).join('');
  const rows = table.rows
    .map((row, rowIndex) => {
      const cells = row.cells
        .map((cell) => {
          const steps = cell.steps
            .map((step, stepOffset) => {
              // step index is flat across the row's cells
              const flat =
                row.cells
                  .slice(0, row.cells.indexOf(cell))
                  .reduce((n, c) => n + c.steps.length, 0) + stepOffset;
              return (
                `<span class="step ${statusClass(step.status)}"` +
                ` data-row="${rowIndex}" data-step="${flat}"` +
                ` draggable="true" data-cell-text="${escapeHtml(step.text)}">` +
                escapeHtml(step.text) +
                (step.edited ? ' *' : '') +
                `</span>`
              );
            })
            .join('');
          return `<td>${steps || escapeHtml(cell.raw)}</td>`;
        })
        .join('');
      return `<tr data-original-index="${row.original_index}">${cells}</tr>`;
    })
    .join('');
  return `<table class="input-table"><tr>${head}</tr>${rows}</table>`;
}

export function renderCarousel(snapshot: Snapshot): string {
  const c = snapshot.carousel;
  const slide = (label: string, text: string | null, cls: string) =>
    text === null
      ? ''
      : `<div class="slide ${cls}"><small>${label}</small>` +
        `<span>${escapeHtml(text)}</span></div>`;
  const prediction = snapshot.prediction
    ? `<div class="prediction">Next: ${escapeHtml(snapshot.prediction)}` +
      `<button id="btn-confirm">Confirm</button>` +
      `<button id="btn-cancel">Cancel</button></div>`
    : '';
  return (
    `<div class="carousel">` +
    slide('done', c.prev, 'slide-prev step-done') +
    slide('current', c.current, 'slide-current step-current') +
    slide('next', c.next, 'slide-next step-pending') +
    prediction +
    `</div>`
  );
}

export function renderBanner(snapshot: Snapshot): string {
  if (snapshot.closed) return '<div class="banner banner-closed">Session closed</div>';
  if (snapshot.completed)
    return '<div class="banner banner-complete">All rows completed</div>';
  if (snapshot.paused_diagnostic)
    return (
      `<div class="banner banner-error">Paused: ` +
      escapeHtml(snapshot.paused_diagnostic) +
      `</div>`
    );
  if (snapshot.mode === 'NeedsDemonstration')
    return (
      '<div class="banner banner-demo">New step: please demonstrate, ' +
      'then advance</div>'
    );
  return `<div class="banner banner-mode">${escapeHtml(snapshot.mode)}</div>`;
}

export function renderControls(snapshot: Snapshot): string {
  const demoModes = snapshot.mode === 'Demonstrating' ||
    snapshot.mode === 'NeedsDemonstration';
  const buttons: string[] = [];
  if (snapshot.mode === 'Idle') {
    buttons.push('<button id="btn-start">Start recording</button>');
  }
  if (demoModes) {
    buttons.push('<button id="btn-advance">Advance</button>');
    buttons.push('<button id="btn-rewind">Rewind</button>');
    buttons.push('<button id="btn-next-row">Next Row</button>');
    if (snapshot.highlight) {
      buttons.push('<button id="btn-cancel-highlight">Cancel highlight</button>');
    }
  }
  if (snapshot.mode === 'SemiAuto' || snapshot.mode === 'FullAuto') {
    buttons.push('<button id="btn-pause">Pause</button>');
  }
  if (snapshot.mode === 'Paused') {
    buttons.push('<button id="btn-resume">Resume</button>');
  }
  buttons.push('<button id="btn-download-log">Download command log</button>');
  return `<div class="controls">${buttons.join('')}</div>`;
}

export function renderError(message: string): string {
  return `<div class="banner banner-error">Render error: ${escapeHtml(message)}</div>`;
}

export function renderSnapshot(snapshot: Snapshot): string {
  try {
    return (
      renderBanner(snapshot) +
      renderCarousel(snapshot) +
      renderControls(snapshot) +
      `<div class="layout"><div class="pane pane-table">` +
      renderTable(snapshot.table) +
      `</div><div class="pane pane-page">` +
      renderPage(snapshot) +
      `</div></div>`
    );
  } catch (err) {
    return renderError(err instanceof Error ? err.message : String(err));
  }
}
