import type { ScoreRow, ViewEntry, ViewPayload } from './model.js';
import type { Playground } from './controller.js';

const PUSHPIN = '\u{1F4CC}';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, cls?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function entryRow(pg: Playground, view: ViewPayload, entry: ViewEntry): HTMLElement {
  if (entry.kind === 'sep') return el('hr', 'sep');

  const row = el('div', `row ${entry.kind}`);
  row.dataset.node = entry.id ?? '';

  if (entry.kind === 'panel') {
    const open = entry.panel_state === 'expanded';
    const head = el('button', 'panel-head', `${open ? '▾' : '▸'} ${entry.label}`);
    head.addEventListener('click', () => {
      void pg.togglePanel(view.menu, entry.id!, entry.panel_state!);
    });
    row.append(head);
    return row;
  }

  const label = el('button', 'label', entry.kind === 'submenu' ? `${entry.label} ›` : entry.label);
  label.addEventListener('click', () => {
    if (entry.kind === 'submenu') {
      void pg.selectSubmenu(view.menu, entry.id!, entry.label);
    } else {
      void pg.selectItem(view.menu, entry.id!);
    }
  });
  row.append(label);

  if (entry.kind === 'item') {
    const pin = el('button', entry.pinned ? 'pin on' : 'pin', '●');
    pin.title = entry.pinned ? 'unpin from short view' : 'pin into short view';
    pin.addEventListener('click', () => {
      void pg.togglePinItem(view.menu, entry.id!, entry.pinned);
    });
    row.append(pin);
  }
  return row;
}

export function renderCard(pg: Playground, view: ViewPayload): HTMLElement {
  const card = el('section', 'card');
  card.dataset.menu = view.menu;

  const bar = el('header');
  bar.append(el('span', 'menu-id', view.menu));
  const pin = el('button', pg.pinnedMenus.has(view.menu) ? 'pushpin on' : 'pushpin', PUSHPIN);
  pin.title = 'keep this menu open';
  pin.addEventListener('click', () => void pg.togglePinMenu(view.menu));
  const close = el('button', 'close', '×');
  close.addEventListener('click', () => void pg.closeCard(view.menu));
  bar.append(pin, close);
  card.append(bar);

  const list = el('div', 'entries');
  for (const entry of view.entries) list.append(entryRow(pg, view, entry));

  if (view.mode === 'short') {
    const more = el('button', 'row more', 'More…');
    more.addEventListener('click', () => void pg.setMode(view.menu, 'long'));
    list.append(more);
  } else {
    const less = el('button', 'row more', 'Less');
    less.addEventListener('click', () => void pg.setMode(view.menu, 'short'));
    list.append(less);
  }
  card.append(list);
  return card;
}

/** Score table with bars; rows currently in the short view get a marker. */
export function renderScores(rows: ScoreRow[], shortIds: Set<string>): HTMLElement {
  const table = el('div', 'scores');
  for (const r of rows) {
    const line = el('div', shortIds.has(r.node) ? 'score short' : 'score');
    line.append(el('span', 'node', r.node));
    const track = el('span', 'track');
    const fill = el('span', 'fill');
    fill.style.width = `${Math.round(r.s * 100)}%`;
    track.append(fill);
    line.append(track, el('span', 'val', r.s.toFixed(3)));
    table.append(line);
  }
  return table;
}
