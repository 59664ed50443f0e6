/** Net document to renderable quad-mesh buffers. */

import { NetDoc } from './types.js';
import { decodePoint } from './decode.js';

export interface NetMesh {
  /** xyz triples, stripe-major */
  positions: Float32Array;
  /** two triangles per lattice quad, indices into positions */
  indices: Uint32Array;
  /** per-vertex rgb from the stripe index */
  colors: Float32Array;
  stripes: number;
  verticesPerStripe: number;
}

function stripeColor(i: number, n: number): [number, number, number] {
  // simple turbo-ish ramp, enough to tell stripes apart
  const t = n <= 1 ? 0 : i / (n - 1);
  return [
    Math.min(1, Math.max(0, 1.6 - Math.abs(4 * t - 2.4))),
    Math.min(1, Math.max(0, 1.6 - Math.abs(4 * t - 1.6))),
    Math.min(1, Math.max(0, 1.6 - Math.abs(4 * t - 0.8))),
  ];
}

export function netToMesh(doc: NetDoc): NetMesh {
  const S = doc.stripes.length;
  const T = doc.stripes[0].length;
  const positions = new Float32Array(S * T * 3);
  const colors = new Float32Array(S * T * 3);
  for (let i = 0; i < S; i++) {
    const [r, g, b] = stripeColor(i, S);
    for (let t = 0; t < T; t++) {
      const xyz = decodePoint(doc.stripes[i][t]);
      const o = (i * T + t) * 3;
      if (xyz === null) {
        positions[o] = positions[o + 1] = positions[o + 2] = NaN;
      } else {
        positions[o] = xyz[0];
        positions[o + 1] = xyz[1];
        positions[o + 2] = xyz[2];
      }
      colors[o] = r;
      colors[o + 1] = g;
      colors[o + 2] = b;
    }
  }
  const tEdges = doc.closed_stripes ? T : T - 1;
  const indices = new Uint32Array((S - 1) * tEdges * 6);
  let k = 0;
  for (let i = 0; i < S - 1; i++) {
    for (let t = 0; t < tEdges; t++) {
      const tn = (t + 1) % T;
      const a = i * T + t;
      const b = i * T + tn;
      const c = (i + 1) * T + tn;
      const d = (i + 1) * T + t;
      indices[k++] = a;
      indices[k++] = b;
      indices[k++] = c;
      indices[k++] = a;
      indices[k++] = c;
      indices[k++] = d;
    }
  }
  return { positions, indices, colors, stripes: S, verticesPerStripe: T };
}

/** Largest |z| over the mesh; a flat net renders in the x-y plane. */
export function maxHeight(mesh: NetMesh): number {
  let worst = 0;
  for (let i = 2; i < mesh.positions.length; i += 3) {
    const z = Math.abs(mesh.positions[i]);
    if (Number.isFinite(z) && z > worst) worst = z;
  }
  return worst;
}
