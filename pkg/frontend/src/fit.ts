import { ScalingRow } from './types.js';

export interface Fit {
  slope: number;
  intercept: number;
  residual: number;
}

/** OLS fit y ≈ slope·x + intercept (same math as the CLI side). */
export function olsFit(xs: number[], ys: number[]): Fit {
  const n = xs.length;
  if (n < 3 || n !== ys.length) {
    throw new Error(`need at least 3 points, got ${n}`);
  }
  const mx = xs.reduce((a, b) => a + b, 0) / n;
  const my = ys.reduce((a, b) => a + b, 0) / n;
  let sxx = 0;
  let sxy = 0;
  for (let i = 0; i < n; i++) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx < 1e-12) throw new Error('degenerate eps grid');
  const slope = sxy / sxx;
  const intercept = my - slope * mx;
  let residual = 0;
  for (let i = 0; i < n; i++) {
    const e = ys[i] - (slope * xs[i] + intercept);
    residual += e * e;
  }
  return { slope, intercept, residual };
}

export function logInvEps(eps: number, base: number): number {
  return Math.log(1 / eps) / Math.log(base);
}

/** Fitted det-count slope of one target's rows, or null when underdetermined. */
export function fitTarget(rows: ScalingRow[], logBase: number): Fit | null {
  const usable = rows.filter((r) => r.detCount !== null);
  if (usable.length < 3) return null;
  try {
    return olsFit(
      usable.map((r) => logInvEps(r.eps, logBase)),
      usable.map((r) => r.detCount as number),
    );
  } catch {
    return null;
  }
}
