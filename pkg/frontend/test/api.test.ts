import { describe, expect, it } from 'vitest';
import { FetchLike, ServerError, SessionClient } from '../src/api.js';
import { applyNet, flattenAll, initialState, lambdaToSlider, setLambda,
         sliderToLambda } from '../src/state.js';
import { NetDoc, ReportDoc } from '../src/types.js';

function netDoc(gaps: number, lambdas?: number[]): NetDoc {
  const stripes = Array.from({ length: gaps + 1 }, () =>
    [[0, 0, 0, 0.5, 0.5, 0], [1, 0, 0, 0, 1, 0]]);
  return {
    version: 1, kind: 'net', model: 'R42', stripes,
    spheres: stripes.map(() => [0, 0, 1, 0, 0, 1]),
    stripe_axis: 0, closed_stripes: false,
    meta: lambdas ? { fold_plan: { lambdas, mode: 'complex' } } : {},
  };
}

const report: ReportDoc = { passed: true, checks: [], details: {} };

function deferredFetch(): { fetch: FetchLike;
                            resolve: (idx: number, body: unknown) => void } {
  const pending: Array<(v: { status: number;
                             json(): Promise<unknown> }) => void> = [];
  const fetch: FetchLike = () => new Promise((res) => pending.push(res));
  return {
    fetch,
    resolve(idx, body) {
      pending[idx]({ status: 200, json: async () => body });
    },
  };
}

describe('SessionClient sequencing', () => {
  it('drops responses that arrive after a newer one', async () => {
    const { fetch, resolve } = deferredFetch();
    const client = new SessionClient('http://x', fetch);
    const first = client.fold([0.1]);
    const second = client.fold([0.2]);
    // the second request returns first
    resolve(1, { net: netDoc(1), report });
    expect(await second).not.toBeNull();
    resolve(0, { net: netDoc(1), report });
    expect(await first).toBeNull();
  });

  it('applies in-order responses', async () => {
    const { fetch, resolve } = deferredFetch();
    const client = new SessionClient('http://x', fetch);
    const first = client.fold([0.1]);
    resolve(0, { net: netDoc(1), report });
    expect(await first).not.toBeNull();
    const second = client.fold([0.2]);
    resolve(1, { net: netDoc(1), report });
    expect(await second).not.toBeNull();
  });

  it('maps error payloads to ServerError', async () => {
    const fetch: FetchLike = async () => ({
      status: 422,
      json: async () => ({ error: { type: 'NoSolutionInRange',
                                    message: 'nope' } }),
    });
    const client = new SessionClient('http://x', fetch);
    await expect(client.close(1, 4)).rejects.toThrowError(ServerError);
  });
});

describe('view state', () => {
  it('adopts nets and their stored plans', () => {
    let st = initialState();
    st = applyNet(st, netDoc(3, [0.5, -1, 2]), report);
    expect(st.lambdas).toEqual([0.5, -1, 2]);
    expect(st.diagnostics?.passed).toBe(true);
    // nets without plans get the flat default
    st = applyNet(st, netDoc(2), report);
    expect(st.lambdas).toEqual([-1, -1]);
  });

  it('clamps slider updates and supports flatten-all', () => {
    let st = applyNet(initialState(), netDoc(2), report);
    st = setLambda(st, 1, 99);
    expect(st.lambdas[1]).toBe(5);
    st = setLambda(st, 0, 0.25);
    st = flattenAll(st);
    expect(st.lambdas).toEqual([-1, -1]);
  });

  it('slider easing is monotone, centered on -1 and invertible', () => {
    expect(sliderToLambda(0.5)).toBeCloseTo(-1, 12);
    expect(sliderToLambda(0)).toBeCloseTo(-5, 12);
    expect(sliderToLambda(1)).toBeCloseTo(5, 12);
    let prev = -Infinity;
    for (let u = 0; u <= 1.0001; u += 0.05) {
      const lam = sliderToLambda(u);
      expect(lam).toBeGreaterThanOrEqual(prev);
      prev = lam;
      expect(sliderToLambda(lambdaToSlider(lam))).toBeCloseTo(lam, 9);
    }
  });
});
