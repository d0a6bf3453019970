// Wiring: a single render loop over the snapshot stream plus event
// delegation for gestures. All state shown comes from the latest snapshot.

import { SessionApi } from './api.js';
import { CommandLog, Gesture, gestureToCommand } from './commands.js';
import { renderSnapshot } from './render.js';
import type { Snapshot } from './types.js';

const api = new SessionApi();
const log = new CommandLog();
let latest: Snapshot | null = null;

const root = document.getElementById('app') as HTMLElement;
const toastBox = document.getElementById('toast') as HTMLElement;

function toast(message: string): void {
  toastBox.textContent = message;
  toastBox.classList.add('visible');
  window.setTimeout(() => toastBox.classList.remove('visible'), 2500);
}

async function send(gesture: Gesture): Promise<void> {
  if (!latest) return;
  const { command, toast: note } = gestureToCommand(gesture, latest);
  if (!command) {
    if (note) toast(note);
    return;
  }
  log.record(command);
  const ack = await api.sendCommand(command);
  if (!ack.ok && ack.error) {
    toast(`${ack.error.type}: ${ack.error.message}`);
  }
}

function downloadLog(): void {
  const blob = new Blob([log.toScriptJson()], { type: 'application/json' });
  const anchor = document.createElement('a');
  anchor.href = URL.createObjectURL(blob);
  anchor.download = 'ui_command_log.json';
  anchor.click();
  URL.revokeObjectURL(anchor.href);
}

const BUTTON_GESTURES: Record<string, Gesture> = {
  'btn-start': { type: 'start-recording' },
  'btn-advance': { type: 'advance' },
  'btn-rewind': { type: 'rewind' },
  'btn-next-row': { type: 'next-row' },
  'btn-confirm': { type: 'confirm' },
  'btn-cancel': { type: 'cancel' },
  'btn-pause': { type: 'pause' },
  'btn-resume': { type: 'resume' },
  'btn-cancel-highlight': { type: 'cancel-highlight' },
};

root.addEventListener('click', (event) => {
  const target = event.target as HTMLElement;
  const button = target.closest('button');
  if (button) {
    if (button.id === 'btn-download-log') {
      downloadLog();
      return;
    }
    const gesture = BUTTON_GESTURES[button.id];
    if (gesture) void send(gesture);
    return;
  }
  const step = target.closest<HTMLElement>('.step');
  if (step && step.dataset.row !== undefined) {
    const text = window.prompt('Edit step text', step.dataset.cellText ?? '');
    if (text !== null && text.trim()) {
      void send({
        type: 'edit-step',
        row: Number(step.dataset.row),
        step: Number(step.dataset.step),
        text,
      });
    }
    return;
  }
  const node = target.closest<HTMLElement>('[data-path]');
  if (node && node.dataset.path) {
    const isOption = node.classList.contains('dom-option');
    void send(
      isOption
        ? { type: 'select-option', path: node.dataset.path }
        : { type: 'click', path: node.dataset.path },
    );
  }
});

root.addEventListener('dragstart', (event) => {
  const step = (event.target as HTMLElement).closest<HTMLElement>('.step');
  if (step && step.dataset.cellText && event.dataTransfer) {
    event.dataTransfer.setData('text/plain', step.dataset.cellText);
  }
});

root.addEventListener('dragover', (event) => {
  const node = (event.target as HTMLElement).closest<HTMLElement>('[data-path]');
  if (node) event.preventDefault();
});

root.addEventListener('drop', (event) => {
  const node = (event.target as HTMLElement).closest<HTMLElement>('[data-path]');
  const text = event.dataTransfer?.getData('text/plain');
  if (node && node.dataset.path && text) {
    event.preventDefault();
    void send({ type: 'drop-text', path: node.dataset.path, text });
  }
});

api.subscribe(
  (snapshot) => {
    latest = snapshot;
    root.innerHTML = renderSnapshot(snapshot);
  },
  () => toast('Session closed'),
);
