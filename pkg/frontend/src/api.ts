// Thin client over the session service endpoints.

import type { Command, CommandAck, Page, Snapshot } from './types.js';

export class SessionApi {
  constructor(private base: string = '') {}

  async uploadInput(rows: Record<string, string>[]): Promise<CommandAck> {
    const res = await fetch(`${this.base}/session/input`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(rows),
    });
    return res.json();
  }

  async sendCommand(command: Command): Promise<CommandAck> {
    const res = await fetch(`${this.base}/session/command`, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(command),
    });
    return res.json();
  }

  async getPage(pageId: string): Promise<Page> {
    const res = await fetch(
      `${this.base}/corpus/page/${encodeURIComponent(pageId)}`,
    );
    return res.json();
  }

  subscribe(onSnapshot: (snap: Snapshot) => void, onClosed?: () => void): EventSource {
    const source = new EventSource(`${this.base}/session/stream`);
    source.onmessage = (message) => {
      onSnapshot(JSON.parse(message.data) as Snapshot);
    };
    source.addEventListener('closed', () => {
      source.close();
      onClosed?.();
    });
    return source;
  }
}
