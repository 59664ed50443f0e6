/** View state: absolute folding sliders, diagnostics, overlay toggles. */

import { NetDoc, ReportDoc } from './types.js';

export interface Overlays {
  spheres: boolean;
  axes: boolean;
  crossRatioHeatmap: boolean;
}

export interface ViewState {
  net: NetDoc | null;
  lambdas: number[];
  diagnostics: ReportDoc | null;
  overlays: Overlays;
}

export const LAMBDA_MIN = -5;
export const LAMBDA_MAX = 5;

export function initialState(): ViewState {
  return {
    net: null,
    lambdas: [],
    diagnostics: null,
    overlays: { spheres: false, axes: true, crossRatioHeatmap: false },
  };
}

/** Adopt a net document; slider count follows the stripe gaps. */
export function applyNet(state: ViewState, net: NetDoc,
                         report: ReportDoc): ViewState {
  const gaps = net.stripes.length - 1;
  let lambdas = net.meta.fold_plan?.lambdas ?? state.lambdas;
  if (lambdas.length !== gaps) {
    lambdas = new Array(gaps).fill(-1);
  }
  return { ...state, net, lambdas: [...lambdas], diagnostics: report };
}

export function setLambda(state: ViewState, gap: number,
                          value: number): ViewState {
  if (gap < 0 || gap >= state.lambdas.length) return state;
  const lambdas = [...state.lambdas];
  lambdas[gap] = Math.min(LAMBDA_MAX, Math.max(LAMBDA_MIN, value));
  return { ...state, lambdas };
}

export function flattenAll(state: ViewState): ViewState {
  return { ...state, lambdas: state.lambdas.map(() => -1) };
}

/**
 * Slider position in [0,1] <-> lambda with quadratic easing centered on
 * the flattening value -1 (the most used region gets fine control).
 */
export function sliderToLambda(u: number): number {
  const t = 2 * Math.min(1, Math.max(0, u)) - 1;   // [-1, 1]
  const eased = Math.sign(t) * t * t;
  const span = eased < 0 ? -1 - LAMBDA_MIN : LAMBDA_MAX + 1;
  return -1 + eased * span;
}

export function lambdaToSlider(lam: number): number {
  const span = lam < -1 ? -1 - LAMBDA_MIN : LAMBDA_MAX + 1;
  const eased = (lam + 1) / span;
  const t = Math.sign(eased) * Math.sqrt(Math.abs(eased));
  return Math.min(1, Math.max(0, (t + 1) / 2));
}
