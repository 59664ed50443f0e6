/** JSON documents exchanged with the liftfold server. */

export interface NetDoc {
  version: number;
  kind: 'net';
  model: 'R42';
  /** stripes[i][t] is a 6-vector light-cone representative */
  stripes: number[][][];
  /** per-stripe sphere vectors, <s,p> = -1 normalized */
  spheres: number[][];
  stripe_axis: number;
  closed_stripes: boolean;
  meta: {
    m_complexes?: number[][];
    fold_plan?: { lambdas: number[]; mode: string };
    cross_ratios?: number[];
    [key: string]: unknown;
  };
}

export interface CheckDoc {
  name: string;
  value: number;
  threshold: number;
  passed: boolean;
  sense: 'max' | 'min';
}

export interface ReportDoc {
  passed: boolean;
  checks: CheckDoc[];
  details: Record<string, unknown>;
}

export interface FoldResponse {
  net: NetDoc;
  report: ReportDoc;
  plan?: { lambdas: number[]; mode: string };
  closure_residual?: number;
}

export interface ErrorResponse {
  error: { type: string; message: string };
}
