import { groupByTarget } from './csv.js';
import { fitTarget } from './fit.js';
import { RunSummary, ScalingRow } from './types.js';

export const SLOPE_MATCH_TOL = 1e-9;

export interface SlopeRow {
  targetId: string;
  fitted: number | null;
  fromSummary: number | null;
  matches: boolean;
}

/** Refit every target from the CSV and compare with the published summary. */
export function slopeTable(rows: ScalingRow[], summary: RunSummary): SlopeRow[] {
  const byTarget = groupByTarget(rows);
  const out: SlopeRow[] = [];
  for (const tid of [...byTarget.keys()].sort()) {
    const fit = fitTarget(byTarget.get(tid) ?? [], summary.config.log_base);
    const fitted = fit === null ? null : fit.slope;
    const fromSummary = summary.slopes[tid] ?? null;
    const matches =
      fitted === null || fromSummary === null
        ? fitted === fromSummary
        : Math.abs(fitted - fromSummary) <= SLOPE_MATCH_TOL;
    out.push({ targetId: tid, fitted, fromSummary, matches });
  }
  return out;
}

const fmt = (v: number | null): string => (v === null ? '-' : v.toFixed(6));

export function buildSummaryMarkdown(
  inputs: { path: string; rows: ScalingRow[] }[],
  summary: RunSummary,
  table: SlopeRow[],
  svgFiles: string[],
): string {
  const lines: string[] = [
    '# Scaling report',
    '',
    '## Inputs',
    ...inputs.map((inp) => `- \`${inp.path}\` (${inp.rows.length} rows)`),
    ...svgFiles.map((svg) => `- plot: \`${svg}\``),
    '',
    '## Config',
    '| key | value |',
    '|---|---|',
    `| gate_set | ${summary.config.gate_set} |`,
    `| log_base | ${summary.config.log_base} |`,
    `| seed | ${summary.config.seed} |`,
    `| budget | ${summary.config.budget} |`,
    `| eps_grid | ${summary.config.eps_grid.join(', ')} |`,
    `| prob | ${summary.config.prob} |`,
    '',
    '## Invariants',
    summary.invariants_ok
      ? 'all row invariants hold'
      : ['violations:', ...summary.problems.map((p) => `- ${p}`)].join('\n'),
    '',
    '## Slopes',
    '| target | fitted | summary | match |',
    '|---|---|---|---|',
    ...table.map(
      (r) =>
        `| ${r.targetId} | ${fmt(r.fitted)} | ${fmt(r.fromSummary)} | ${r.matches ? 'yes' : 'NO'} |`,
    ),
    '',
  ];
  return lines.join('\n');
}
