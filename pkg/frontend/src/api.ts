/** Client for the liftfold serve endpoints with response sequencing.
 *
 * Slider drags can outrun the server; every request gets a sequence
 * number and responses arriving out of order are dropped, so the scene
 * always reflects the newest acknowledged state.
 */

import { FoldResponse, NetDoc, ReportDoc } from './types.js';

export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<{ status: number; json(): Promise<unknown> }>;

export class ServerError extends Error {
  constructor(public status: number, public type: string, message: string) {
    super(message);
  }
}

export class SessionClient {
  private seq = 0;
  private applied = 0;

  constructor(private baseUrl: string,
              private fetchImpl: FetchLike =
              (globalThis.fetch as unknown as FetchLike)) {}

  private async request<T>(path: string, body?: unknown): Promise<T> {
    const init = body === undefined ? undefined : {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    };
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    const payload = await resp.json();
    if (resp.status !== 200) {
      const err = payload as { error?: { type: string; message: string } };
      throw new ServerError(resp.status, err.error?.type ?? 'Unknown',
                            err.error?.message ?? 'server error');
    }
    return payload as T;
  }

  async getNet(): Promise<FoldResponse> {
    return this.request<FoldResponse>('/net');
  }

  async getReport(): Promise<ReportDoc> {
    return this.request<ReportDoc>('/report');
  }

  /**
   * Refold from the base.  Resolves to the response when it is the newest
   * applied one, or to null when a newer response already landed.
   */
  async fold(lambdas: number[]): Promise<FoldResponse | null> {
    const ticket = ++this.seq;
    const payload = await this.request<FoldResponse>('/fold', { lambdas });
    if (ticket < this.applied) return null;
    this.applied = ticket;
    return payload;
  }

  async reflect(): Promise<FoldResponse> {
    const ticket = ++this.seq;
    const payload = await this.request<FoldResponse>('/reflect', {});
    this.applied = ticket;
    return payload;
  }

  async close(p: number, q: number): Promise<FoldResponse> {
    const ticket = ++this.seq;
    const payload = await this.request<FoldResponse>('/close', { p, q });
    this.applied = ticket;
    return payload;
  }
}
