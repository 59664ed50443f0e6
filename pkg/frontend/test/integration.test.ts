/** End-to-end test against the real session server.
 *
 * Spawns `python3 -m liftfold.cli serve` on a fixture flat base; skipped
 * when the python package is not importable in this environment.
 */

import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { spawn, spawnSync, ChildProcess } from 'node:child_process';
import { fileURLToPath } from 'node:url';
import { dirname, join } from 'node:path';
import { SessionClient } from '../src/api.js';
import { netToMesh, maxHeight } from '../src/mesh.js';

const here = dirname(fileURLToPath(import.meta.url));
const fixture = join(here, 'fixtures', 'flat_base.json');

const havePython = spawnSync('python3', ['-c', 'import liftfold'])
  .status === 0;

let proc: ChildProcess | null = null;
let base = '';

describe.skipIf(!havePython)('against the live server', () => {
  beforeAll(async () => {
    proc = spawn('python3', ['-m', 'liftfold.cli', 'serve',
                             '--in', fixture, '--port', '0']);
    base = await new Promise<string>((resolve, reject) => {
      let buf = '';
      proc!.stdout!.on('data', (chunk: Buffer) => {
        buf += chunk.toString();
        const m = buf.match(/serving on (http:\/\/[\d.]+:\d+)/);
        if (m) resolve(m[1]);
      });
      proc!.on('exit', () => reject(new Error('server exited')));
      setTimeout(() => reject(new Error('server start timeout')), 20000);
    });
  }, 30000);

  afterAll(() => {
    proc?.kill();
  });

  it('round-trips the net and mirrors the report verbatim', async () => {
    const client = new SessionClient(base);
    const payload = await client.getNet();
    expect(payload.net.kind).toBe('net');
    const report = await client.getReport();
    expect(JSON.stringify(report)).toBe(JSON.stringify(payload.report));
  });

  it('lambda = -1 everywhere renders the flat base', async () => {
    const client = new SessionClient(base);
    const { net } = await client.getNet();
    const gaps = net.stripes.length - 1;
    const folded = await client.fold(new Array(gaps).fill(-1));
    expect(folded).not.toBeNull();
    const mesh = netToMesh(folded!.net);
    expect(maxHeight(mesh)).toBeLessThan(1e-9);
  });

  it('generic folds leave the plane and still verify', async () => {
    const client = new SessionClient(base);
    const { net } = await client.getNet();
    const gaps = net.stripes.length - 1;
    const lam = Array.from({ length: gaps }, (_, i) => -0.2 + 0.3 * i);
    const folded = await client.fold(lam);
    expect(folded).not.toBeNull();
    expect(folded!.report.passed).toBe(true);
    expect(maxHeight(netToMesh(folded!.net))).toBeGreaterThan(1e-3);
  });
}, 60000);
