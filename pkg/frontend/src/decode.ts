/** Decoding light-cone vectors for display.
 *
 * The viewer never computes geometry beyond this: all results come from
 * the server.  Vectors of R^{4,2} use the coordinate order
 * (x, y, z, (1-|x|^2)/2, (1+|x|^2)/2, r) with signature (+,+,+,+,-,-).
 */

const SIG6 = [1, 1, 1, 1, -1, -1];

export function ip(u: number[], v: number[]): number {
  let s = 0;
  for (let i = 0; i < u.length; i++) s += u[i] * v[i] * SIG6[i];
  return s;
}

/** Euclidean coordinates of a point vector; null for infinity. */
export function decodePoint(v: number[]): [number, number, number] | null {
  const den = v[3] + v[4];
  const scale = Math.hypot(v[0], v[1], v[2], v[3], v[4], v[5]);
  if (Math.abs(den) < 1e-12 * scale) return null;
  return [v[0] / den, v[1] / den, v[2] / den];
}

export interface SphereShape {
  kind: 'sphere' | 'plane';
  center?: [number, number, number];
  radius?: number;
  normal?: [number, number, number];
  distance?: number;
}

/** Classify a lightlike 6-vector as a sphere or a plane. */
export function decodeSphere(v: number[]): SphereShape {
  const den = v[3] + v[4];                    // <v, q0-hat>
  const scale = Math.hypot(...v);
  if (Math.abs(den) < 1e-10 * scale) {
    const w = v.map((x) => x / v[5]);
    const n = Math.hypot(w[0], w[1], w[2]);
    return {
      kind: 'plane',
      normal: [w[0] / n, w[1] / n, w[2] / n],
      distance: -w[3] / n,
    };
  }
  const w = v.map((x) => x / den);
  return { kind: 'sphere', center: [w[0], w[1], w[2]], radius: w[5] };
}

export interface AxisShape {
  kind: 'circle' | 'line';
  real: boolean;
  center?: [number, number, number];
  radius?: number;
  /** two points spanning the line when kind = "line" */
  through?: [number, number, number][];
}

/**
 * The folding axis of a stripe-pair complex m: the point set of the
 * complex, i.e. the directrix circle of its p-orthogonal part.  Complex
 * (imaginary) axes are flagged real: false and not drawn.
 */
export function foldingAxis(m: number[]): AxisShape {
  const p: number[] = [0, 0, 0, 0, 0, 1];
  const mp = ip(m, p);
  const mperp = m.map((x, i) => x + mp * p[i]);
  const mm = ip(mperp, mperp);
  if (mm <= 0) {
    return { kind: 'circle', real: false };
  }
  // directrix: mperp + lambda p with lambda = -sqrt(<m',m'>)
  const lam = -Math.sqrt(mm);
  const ax = mperp.map((x, i) => x + lam * p[i]);
  const shape = decodeSphere(ax);
  if (shape.kind === 'plane') {
    return { kind: 'line', real: true };
  }
  return {
    kind: 'circle',
    real: true,
    center: shape.center,
    radius: Math.abs(shape.radius ?? 0),
  };
}
