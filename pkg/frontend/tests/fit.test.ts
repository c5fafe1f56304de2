import { describe, expect, it } from 'vitest';

import { fitTarget, logInvEps, olsFit } from '../src/fit.js';
import { ScalingRow } from '../src/types.js';

const row = (eps: number, det: number | null): ScalingRow => ({
  targetId: 't',
  kind: 'synthetic',
  eps,
  detCount: det,
  probCount: null,
  bestDistance: eps / 2,
  elapsedMs: null,
});

describe('olsFit', () => {
  it('recovers an exact line', () => {
    const xs = [0, 1, 2, 3];
    const ys = xs.map((x) => 3 * x + 0.5);
    const { slope, intercept, residual } = olsFit(xs, ys);
    expect(slope).toBeCloseTo(3, 12);
    expect(intercept).toBeCloseTo(0.5, 12);
    expect(residual).toBeLessThan(1e-20);
  });

  it('fits constant data with slope 0', () => {
    expect(olsFit([0, 1, 2], [4, 4, 4]).slope).toBeCloseTo(0, 12);
  });

  it('rejects degenerate input', () => {
    expect(() => olsFit([1, 1, 1], [1, 2, 3])).toThrowError(/degenerate/);
    expect(() => olsFit([1, 2], [1, 2])).toThrowError(/at least 3/);
  });
});

describe('fitTarget', () => {
  it('matches a synthetic slope-3 series', () => {
    const eps = [0.3, 0.2, 0.15, 0.1, 0.07, 0.05];
    const rows = eps.map((e) => row(e, Math.round(3 * logInvEps(e, 5))));
    const fit = fitTarget(rows, 5);
    expect(fit).not.toBeNull();
    expect(Math.abs((fit?.slope ?? 0) - 3)).toBeLessThan(0.4);
  });

  it('skips budget-exhausted rows and underdetermined targets', () => {
    expect(fitTarget([row(0.3, 1), row(0.2, null), row(0.1, 2)], 2)).toBeNull();
  });
});
