// Wire types mirroring the session service's snapshot payloads.

export interface PageNode {
  tag: string;
  path: string;
  text: string;
  attributes: Record<string, string>;
  interactive: boolean;
  visible: boolean;
  children: PageNode[];
}

export interface Page {
  id: string;
  revision: number;
  tree: PageNode;
}

export interface StepView {
  text: string;
  status: 'Pending' | 'Current' | 'Done';
  edited: boolean;
}

export interface CellView {
  raw: string;
  steps: StepView[];
}

export interface RowView {
  original_index: number;
  cells: CellView[];
}

export interface TableView {
  columns: string[];
  rows: RowView[];
}

export interface HighlightView {
  page: string;
  path: string;
  control: string | null;
  text: string;
  score: number;
}

export interface CarouselView {
  prev: string | null;
  current: string | null;
  next: string | null;
}

export interface Snapshot {
  seq: number;
  mode: string;
  completed: boolean;
  closed: boolean;
  current_row: number;
  current_step: number | null;
  carousel: CarouselView;
  page: Page | null;
  highlight: HighlightView | null;
  prediction: string | null;
  paused_diagnostic: string | null;
  catalog_size: number;
  tick_rate: number;
  table: TableView | null;
}

export interface UserEvent {
  kind: 'Click' | 'InputText' | 'SelectOption' | 'CancelHighlight';
  target?: string;
  payload?: string;
}

export type Command =
  | { command: 'upload-input'; rows: Record<string, string>[] }
  | { command: 'start-recording' }
  | { command: 'user-event'; event: UserEvent }
  | { command: 'advance' }
  | { command: 'rewind' }
  | { command: 'next-row' }
  | { command: 'confirm' }
  | { command: 'cancel' }
  | { command: 'pause' }
  | { command: 'resume' }
  | { command: 'edit-step'; row: number; step: number; text: string }
  | { command: 'tick-rate'; per_second: number };

export interface CommandAck {
  ok: boolean;
  seq: number;
  mode: string;
  error?: { type: string; message: string } | null;
}
