// Gesture-to-command mapping and the session command log.
//
// The UI never simulates session logic: gestures translate to service
// commands, the server decides everything, and the log of sent commands can
// be replayed through the headless CLI to reproduce the identical transcript.

import type { Command, Snapshot, UserEvent } from './types.js';

export type Gesture =
  | { type: 'click'; path: string }
  | { type: 'drop-text'; path: string; text: string }
  | { type: 'select-option'; path: string }
  | { type: 'cancel-highlight' }
  | { type: 'edit-step'; row: number; step: number; text: string }
  | { type: 'confirm' }
  | { type: 'cancel' }
  | { type: 'advance' }
  | { type: 'rewind' }
  | { type: 'next-row' }
  | { type: 'pause' }
  | { type: 'resume' }
  | { type: 'start-recording' };

const DEMONSTRATION_MODES = new Set(['Demonstrating', 'NeedsDemonstration']);

export interface GestureOutcome {
  command: Command | null;
  toast: string | null;
}

export function gestureToCommand(
  gesture: Gesture,
  snapshot: Snapshot,
): GestureOutcome {
  const mode = snapshot.mode;
  const demo = DEMONSTRATION_MODES.has(mode);
  const blocked = (what: string): GestureOutcome => ({
    command: null,
    toast: `${what} is not available while the session is in ${mode}`,
  });
  switch (gesture.type) {
    case 'click':
    case 'select-option': {
      if (!demo) return blocked('demonstrating');
      const event: UserEvent = {
        kind: gesture.type === 'click' ? 'Click' : 'SelectOption',
        target: gesture.path,
      };
      return { command: { command: 'user-event', event }, toast: null };
    }
    case 'drop-text': {
      if (!demo) return blocked('demonstrating');
      const event: UserEvent = {
        kind: 'InputText',
        target: gesture.path,
        payload: gesture.text,
      };
      return { command: { command: 'user-event', event }, toast: null };
    }
    case 'cancel-highlight': {
      if (!demo) return blocked('cancelling the highlight');
      return {
        command: { command: 'user-event', event: { kind: 'CancelHighlight' } },
        toast: null,
      };
    }
    case 'edit-step': {
      if (!demo && mode !== 'Paused') return blocked('editing steps');
      return {
        command: {
          command: 'edit-step',
          row: gesture.row,
          step: gesture.step,
          text: gesture.text,
        },
        toast: null,
      };
    }
    case 'confirm':
    case 'cancel': {
      if (mode !== 'SemiAuto') return blocked('reviewing predictions');
      return { command: { command: gesture.type }, toast: null };
    }
    case 'advance':
    case 'rewind':
    case 'next-row': {
      if (!demo) return blocked('moving the carousel');
      return { command: { command: gesture.type }, toast: null };
    }
    case 'pause': {
      if (mode !== 'SemiAuto' && mode !== 'FullAuto')
        return blocked('pausing');
      return { command: { command: 'pause' }, toast: null };
    }
    case 'resume': {
      if (mode !== 'Paused') return blocked('resuming');
      return { command: { command: 'resume' }, toast: null };
    }
    case 'start-recording': {
      if (mode !== 'Idle') return blocked('starting the recording');
      return { command: { command: 'start-recording' }, toast: null };
    }
  }
}

export class CommandLog {
  private commands: Command[] = [];

  record(command: Command): void {
    this.commands.push(command);
  }

  get length(): number {
    return this.commands.length;
  }

  entries(): readonly Command[] {
    return this.commands;
  }

  // Matches the CLI script schema, so the log replays headlessly as-is.
  toScriptJson(): string {
    return JSON.stringify({ commands: this.commands }, null, 2) + '\n';
  }
}
