#!/usr/bin/env node
/**
 * report --in runs/scaling.csv [--in more.csv] --summary runs/scaling.json \
 *        --out report/ [--ref-slopes 3,1.5,4]
 *
 * Renders one SVG per input CSV plus report.md; exits nonzero when inputs are
 * missing, a CSV violates the row schema, or the slope table disagrees with
 * the published JSON summary.
 */

import { existsSync, mkdirSync, readFileSync, writeFileSync } from 'node:fs';
import { basename, join } from 'node:path';

import { parseScalingCsv } from './csv.js';
import { buildSummaryMarkdown, slopeTable } from './report.js';
import { renderScalingSvg } from './svg.js';
import { DEFAULT_OPTIONS, ReportSpec, RunSummary, ScalingRow } from './types.js';

export function parseArgs(argv: string[]): ReportSpec {
  const csvPaths: string[] = [];
  let summaryPath = '';
  let outDir = 'report';
  let refSlopes = DEFAULT_OPTIONS.referenceSlopes;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === '--in') csvPaths.push(argv[++i]);
    else if (a === '--summary') summaryPath = argv[++i];
    else if (a === '--out') outDir = argv[++i];
    else if (a === '--ref-slopes') refSlopes = argv[++i].split(',').map(Number);
    else throw new Error(`unknown argument ${a}`);
  }
  if (csvPaths.length === 0) throw new Error('at least one --in CSV is required');
  if (!summaryPath) {
    summaryPath = csvPaths[0].replace(/\.csv$/, '.json');
  }
  return {
    csvPaths,
    summaryPath,
    outDir,
    options: { ...DEFAULT_OPTIONS, referenceSlopes: refSlopes },
  };
}

export function runReport(spec: ReportSpec): number {
  if (!existsSync(spec.summaryPath)) {
    console.error(`missing JSON summary: ${spec.summaryPath}`);
    return 1;
  }
  const summary = JSON.parse(readFileSync(spec.summaryPath, 'utf-8')) as RunSummary;
  const options = { ...spec.options, logBase: summary.config.log_base };
  const inputs: { path: string; rows: ScalingRow[] }[] = [];
  for (const path of spec.csvPaths) {
    if (!existsSync(path)) {
      console.error(`missing input CSV: ${path}`);
      return 1;
    }
    inputs.push({ path, rows: parseScalingCsv(readFileSync(path, 'utf-8'), path) });
  }
  mkdirSync(spec.outDir, { recursive: true });
  const svgFiles: string[] = [];
  for (const inp of inputs) {
    const name = basename(inp.path).replace(/\.csv$/, '') + '.svg';
    const svg = renderScalingSvg(
      inp.rows,
      options,
      `${summary.config.gate_set}: G-count scaling`,
    );
    writeFileSync(join(spec.outDir, name), svg);
    svgFiles.push(name);
  }
  const allRows = inputs.flatMap((inp) => inp.rows);
  const table = slopeTable(allRows, summary);
  const md = buildSummaryMarkdown(inputs, summary, table, svgFiles);
  writeFileSync(join(spec.outDir, 'report.md'), md);
  const mismatches = table.filter((r) => !r.matches);
  for (const m of mismatches) {
    console.error(
      `slope mismatch for ${m.targetId}: fitted ${m.fitted} vs summary ${m.fromSummary}`,
    );
  }
  if (!summary.invariants_ok) {
    console.error('run reported invariant violations');
    return 1;
  }
  return mismatches.length === 0 ? 0 : 1;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(basename(process.argv[1]));

if (invokedDirectly) {
  try {
    process.exit(runReport(parseArgs(process.argv.slice(2))));
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    process.exit(1);
  }
}
