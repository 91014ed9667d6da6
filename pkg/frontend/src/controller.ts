import type { Api } from './api.js';
import type { MenuInfo, ViewPayload } from './model.js';

export interface PlaygroundEvents {
  onChange?: () => void;
  onError?: (kind: string) => void;
}

/**
 * Holds the open menu cards and mirrors the engine's own open/close
 * rules: a selection closes every open menu except pinned ones, a
 * submenu selection opens its target. No DOM in here; the render layer
 * subscribes to onChange and redraws from `cards`.
 */
export class Playground {
  readonly cards = new Map<string, ViewPayload>();
  readonly pinnedMenus = new Set<string>();
  menus: MenuInfo[] = [];
  clock = 0;

  constructor(private readonly api: Api, private readonly events: PlaygroundEvents = {}) {}

  async loadMenus(): Promise<void> {
    try {
      this.menus = (await this.api.menus()).menus;
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }

  private notify(): void {
    this.events.onChange?.();
  }

  private fail(err: unknown): void {
    const kind = err instanceof Error && 'kind' in err ? String((err as { kind: unknown }).kind) : 'network';
    this.events.onError?.(kind);
  }

  async openMenu(menu: string, mode?: 'short' | 'long'): Promise<void> {
    try {
      this.cards.set(menu, await this.api.view(menu, mode));
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }

  /** Re-fetch an already open card without changing card order. */
  private async refresh(menu: string): Promise<void> {
    if (this.cards.has(menu)) this.cards.set(menu, await this.api.view(menu));
  }

  async closeCard(menu: string): Promise<void> {
    try {
      if (this.pinnedMenus.has(menu)) {
        await this.api.pinMenu(menu, false);
        this.pinnedMenus.delete(menu);
      }
      this.cards.delete(menu);
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }

  /** An item row was clicked: record it, then drop unpinned cards. */
  async selectItem(menu: string, node: string): Promise<void> {
    try {
      const ok = await this.api.select(menu, node);
      this.clock = ok.clock;
      for (const id of [...this.cards.keys()]) {
        if (!this.pinnedMenus.has(id)) this.cards.delete(id);
      }
      for (const id of this.cards.keys()) await this.refresh(id);
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }

  /**
   * A submenu row was clicked: same as a selection, plus the target
   * opens. The view payload does not name the target menu, so resolve
   * it by the common authoring convention (link id or label matching
   * the target menu); an unresolvable link is still logged.
   */
  async selectSubmenu(menu: string, node: string, label: string): Promise<void> {
    await this.selectItem(menu, node);
    const target =
      this.menus.find((m) => m.id === node) ??
      this.menus.find((m) => m.label === label);
    if (target) await this.openMenu(target.id);
  }

  async setMode(menu: string, mode: 'short' | 'long'): Promise<void> {
    try {
      await this.api.expand(menu, mode);
      await this.refresh(menu);
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }

  async togglePinMenu(menu: string): Promise<void> {
    const on = !this.pinnedMenus.has(menu);
    try {
      await this.api.pinMenu(menu, on);
      if (on) this.pinnedMenus.add(menu);
      else this.pinnedMenus.delete(menu);
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }

  async togglePinItem(menu: string, node: string, pinned: boolean): Promise<void> {
    try {
      await this.api.pinItem(menu, node, !pinned);
      await this.refresh(menu);
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }

  async togglePanel(menu: string, panel: string, state: 'expanded' | 'contracted'): Promise<void> {
    const next = state === 'expanded' ? 'contracted' : 'expanded';
    try {
      await this.api.panel(menu, panel, next);
      await this.refresh(menu);
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }

  /** Advance the engine clock by whole seconds. */
  async advance(seconds: number): Promise<void> {
    try {
      const ok = await this.api.clock(this.clock + seconds);
      this.clock = ok.clock;
      this.notify();
    } catch (err) {
      this.fail(err);
    }
  }
}
