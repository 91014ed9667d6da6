import { Api } from './api.js';
import { Playground } from './controller.js';
import { renderCard, renderScores } from './render.js';

const api = new Api('');
const status = document.getElementById('status')!;
const menubar = document.getElementById('menubar')!;
const cardsBox = document.getElementById('cards')!;
const scoresBox = document.getElementById('scores-box')!;

let focused: string | null = null;

const pg = new Playground(api, {
  onChange: () => void redraw(),
  onError: (kind) => {
    status.textContent = kind;
    status.classList.add('error');
    setTimeout(() => {
      status.textContent = '';
      status.classList.remove('error');
    }, 2500);
  },
});

async function redraw(): Promise<void> {
  menubar.replaceChildren();
  for (const m of pg.menus) {
    const btn = document.createElement('button');
    btn.textContent = m.label;
    btn.className = pg.cards.has(m.id) ? 'menu-btn open' : 'menu-btn';
    btn.addEventListener('click', () => {
      focused = m.id;
      void pg.openMenu(m.id);
    });
    menubar.append(btn);
  }

  cardsBox.replaceChildren();
  for (const view of pg.cards.values()) {
    cardsBox.append(renderCard(pg, view));
  }

  // score inspector follows the focused menu; short-view members are
  // marked so promotions are visible as they happen
  if (focused && pg.cards.has(focused)) {
    try {
      const rows = (await api.scores(focused)).rows;
      const short = await api.view(focused, 'short');
      const shortIds = new Set(
        short.entries.filter((e) => e.id !== null).map((e) => e.id as string),
      );
      scoresBox.replaceChildren(renderScores(rows, shortIds));
    } catch {
      scoresBox.replaceChildren();
    }
  }

  const clock = document.getElementById('clock');
  if (clock) clock.textContent = `t=${pg.clock}`;
}

document.getElementById('tick')!.addEventListener('click', () => {
  void pg.advance(3600);
});

void pg.loadMenus().then(() => redraw());
