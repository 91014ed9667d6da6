// Payload shapes, mirroring the service's JSON exactly.

export interface MenuInfo {
  id: string;
  label: string;
}

export type EntryKind = 'item' | 'submenu' | 'panel' | 'sep';

export interface ViewEntry {
  pos: number;
  id: string | null; // null only for separators
  kind: EntryKind;
  label: string;
  pinned: boolean;
  panel_state?: 'expanded' | 'contracted';
}

export interface ViewPayload {
  menu: string;
  mode: 'short' | 'long';
  truncated: boolean;
  entries: ViewEntry[];
}

export interface ScoreRow {
  node: string;
  f_hat: number;
  r: number;
  tau: number;
  s: number;
  rank: number;
}

export interface OkBody {
  ok: true;
  clock: number;
}
