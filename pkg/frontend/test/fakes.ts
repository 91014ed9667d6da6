// Hand-rolled stand-in for the HTTP client. Serves canned views, keeps
// the same open/close bookkeeping the engine does, and records calls.

import { ApiError } from '../src/api.js';
import type { Api } from '../src/api.js';
import type { MenuInfo, OkBody, ScoreRow, ViewEntry, ViewPayload } from '../src/model.js';

function entry(pos: number, id: string, kind: ViewEntry['kind'] = 'item'): ViewEntry {
  return { pos, id, kind, label: id.toUpperCase(), pinned: false };
}

export class FakeApi implements Pick<Api, keyof Api> {
  readonly base = 'fake://';
  readonly calls: string[] = [];
  readonly open = new Set<string>();
  readonly pinned = new Set<string>();
  readonly modes = new Map<string, 'short' | 'long'>();
  engineClock = 0;

  private readonly items: Record<string, string[]> = {
    m: ['a', 'b', 'c', 'd'],
    other: ['x', 'y'],
  };

  private ok(): Promise<OkBody> {
    return Promise.resolve({ ok: true, clock: this.engineClock });
  }

  menus(): Promise<{ menus: MenuInfo[] }> {
    this.calls.push('menus');
    return Promise.resolve({
      menus: [
        { id: 'm', label: 'Main' },
        { id: 'other', label: 'Other' },
      ],
    });
  }

  view(menu: string, mode?: 'short' | 'long'): Promise<ViewPayload> {
    this.calls.push(`view ${menu}${mode ? ' ' + mode : ''}`);
    const ids = this.items[menu];
    if (!ids) return Promise.reject(new ApiError(404, 'unknown-menu'));
    this.open.add(menu);
    const eff = mode ?? this.modes.get(menu) ?? 'short';
    const shown = eff === 'short' ? ids.slice(0, 2) : ids;
    return Promise.resolve({
      menu,
      mode: eff,
      truncated: shown.length < ids.length,
      entries: shown.map((id, i) => entry(i + 1, id)),
    });
  }

  scores(menu: string): Promise<{ rows: ScoreRow[] }> {
    this.calls.push(`scores ${menu}`);
    const ids = this.items[menu];
    if (!ids) return Promise.reject(new ApiError(404, 'unknown-menu'));
    return Promise.resolve({
      rows: ids.map((id, i) => ({
        node: id, f_hat: 0, r: 0, tau: 0, s: 0, rank: i + 1,
      })),
    });
  }

  select(menu: string, node: string): Promise<OkBody> {
    this.calls.push(`select ${menu}/${node}`);
    if (!this.items[menu]?.includes(node)) {
      return Promise.reject(new ApiError(404, 'unknown-node'));
    }
    // the engine closes only the selected menu, and only when unpinned
    if (!this.pinned.has(menu)) this.open.delete(menu);
    return this.ok();
  }

  expand(menu: string, mode: 'short' | 'long'): Promise<OkBody> {
    this.calls.push(`expand ${menu} ${mode}`);
    this.modes.set(menu, mode);
    return this.ok();
  }

  pinMenu(menu: string, on: boolean): Promise<OkBody> {
    this.calls.push(`pinMenu ${menu} ${on}`);
    if (on && !this.open.has(menu)) {
      return Promise.reject(new ApiError(409, 'menu-not-open'));
    }
    if (on) this.pinned.add(menu);
    else this.pinned.delete(menu);
    return this.ok();
  }

  pinItem(menu: string, node: string, on: boolean): Promise<OkBody> {
    this.calls.push(`pinItem ${menu}/${node} ${on}`);
    return this.ok();
  }

  panel(menu: string, panel: string, state: 'expanded' | 'contracted'): Promise<OkBody> {
    this.calls.push(`panel ${menu}/${panel} ${state}`);
    return this.ok();
  }

  clock(at: number): Promise<OkBody> {
    this.calls.push(`clock ${at}`);
    if (at < this.engineClock) {
      return Promise.reject(new ApiError(409, 'clock-regression'));
    }
    this.engineClock = at;
    return this.ok();
  }
}
