import type { MenuInfo, OkBody, ScoreRow, ViewPayload } from './model.js';

export class ApiError extends Error {
  constructor(readonly status: number, readonly kind: string) {
    super(`${kind} (HTTP ${status})`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, init);
  if (!res.ok) {
    let kind = 'unknown';
    try {
      kind = ((await res.json()) as { error?: string }).error ?? kind;
    } catch {
      // non-JSON error body, keep the fallback kind
    }
    throw new ApiError(res.status, kind);
  }
  return (await res.json()) as T;
}

function post<T>(url: string, body: unknown): Promise<T> {
  return request<T>(url, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  });
}

/** Typed client for one engine. All calls go through the same base URL. */
export class Api {
  constructor(readonly base: string = '') {}

  menus(): Promise<{ menus: MenuInfo[] }> {
    return request(`${this.base}/api/menus`);
  }

  view(menu: string, mode?: 'short' | 'long'): Promise<ViewPayload> {
    const q = mode ? `&mode=${mode}` : '';
    return request(`${this.base}/api/view?menu=${encodeURIComponent(menu)}${q}`);
  }

  scores(menu: string): Promise<{ rows: ScoreRow[] }> {
    return request(`${this.base}/api/scores?menu=${encodeURIComponent(menu)}`);
  }

  select(menu: string, node: string): Promise<OkBody> {
    return post(`${this.base}/api/select`, { menu, node });
  }

  expand(menu: string, mode: 'short' | 'long'): Promise<OkBody> {
    return post(`${this.base}/api/expand`, { menu, mode });
  }

  pinMenu(menu: string, on: boolean): Promise<OkBody> {
    return post(`${this.base}/api/pin`, { kind: 'menu', menu, on });
  }

  pinItem(menu: string, node: string, on: boolean): Promise<OkBody> {
    return post(`${this.base}/api/pin`, { kind: 'item', menu, node, on });
  }

  panel(menu: string, panel: string, state: 'expanded' | 'contracted'): Promise<OkBody> {
    return post(`${this.base}/api/panel`, { menu, panel, state });
  }

  clock(at: number): Promise<OkBody> {
    return post(`${this.base}/api/clock`, { at });
  }
}
