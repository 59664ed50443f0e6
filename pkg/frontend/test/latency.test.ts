/** Desk-scale latency: a slider change round-trips in < 200 ms at 40x120.
 *
 * Builds the 40x120 session through the CLI at test time and measures the
 * full HTTP fold round trip.  Skipped without the python package.
 */

import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { spawn, spawnSync, ChildProcess } from 'node:child_process';
import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { SessionClient } from '../src/api.js';

const havePython = spawnSync('python3', ['-c', 'import liftfold'])
  .status === 0;

const GEN = `
import sys
from liftfold.curves import elastic_curve_euclidean, solve_figure_eight
from liftfold.darboux import extend_holomorphic
from liftfold.folding import lift_net
from liftfold import netfile
k = solve_figure_eight(120, h=0.05)
curve, _ = elastic_curve_euclidean(k, 0.05, 120, r=120, closed=True)
hmap = extend_holomorphic(curve, 39, lambdas="auto")
netfile.save_doc(netfile.net_to_doc(lift_net(hmap)), sys.argv[1])
`;

let proc: ChildProcess | null = null;
let base = '';

describe.skipIf(!havePython)('desk-scale latency', () => {
  beforeAll(async () => {
    const dir = mkdtempSync(join(tmpdir(), 'liftfold-'));
    const netPath = join(dir, 'net40x120.json');
    const script = join(dir, 'gen.py');
    writeFileSync(script, GEN);
    const gen = spawnSync('python3', [script, netPath], { timeout: 120000 });
    expect(gen.status).toBe(0);
    proc = spawn('python3', ['-m', 'liftfold.cli', 'serve',
                             '--in', netPath, '--port', '0']);
    base = await new Promise<string>((resolve, reject) => {
      let buf = '';
      proc!.stdout!.on('data', (chunk: Buffer) => {
        buf += chunk.toString();
        const m = buf.match(/serving on (http:\/\/[\d.]+:\d+)/);
        if (m) resolve(m[1]);
      });
      proc!.on('exit', () => reject(new Error('server exited')));
      setTimeout(() => reject(new Error('server start timeout')), 30000);
    });
  }, 120000);

  afterAll(() => {
    proc?.kill();
  });

  it('folds a 40x120 net under 200 ms per round trip', async () => {
    const client = new SessionClient(base);
    const { net } = await client.getNet();
    expect(net.stripes.length).toBe(40);
    expect(net.stripes[0].length).toBe(120);
    const gaps = net.stripes.length - 1;
    // warm-up, then measure
    await client.fold(new Array(gaps).fill(-0.5));
    const times: number[] = [];
    for (let trial = 0; trial < 5; trial++) {
      const lam = Array.from({ length: gaps },
                             (_, i) => -0.5 + 0.02 * trial + 0.01 * (i % 3));
      const t0 = performance.now();
      const out = await client.fold(lam);
      times.push(performance.now() - t0);
      expect(out).not.toBeNull();
    }
    times.sort((a, b) => a - b);
    expect(times[Math.floor(times.length / 2)]).toBeLessThan(200);
  }, 60000);
});
