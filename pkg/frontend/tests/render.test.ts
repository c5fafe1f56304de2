import { mkdtempSync, readFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { describe, expect, it } from 'vitest';

import { parseScalingCsv } from '../src/csv.js';
import { runReport } from '../src/cli.js';
import { renderScalingSvg } from '../src/svg.js';
import { DEFAULT_OPTIONS, RunSummary } from '../src/types.js';

const FIXTURES = join(__dirname, 'fixtures');
const GOLDEN = join(__dirname, 'golden');

const loadRows = (name: string) =>
  parseScalingCsv(readFileSync(join(FIXTURES, name), 'utf-8'), name);

describe('renderScalingSvg', () => {
  it('is byte-deterministic', () => {
    const rows = loadRows('scaling_v5.csv');
    const opts = { ...DEFAULT_OPTIONS, logBase: 5 };
    expect(renderScalingSvg(rows, opts, 't')).toEqual(
      renderScalingSvg(rows, opts, 't'),
    );
  });

  it('matches the committed golden SVG', () => {
    const rows = loadRows('scaling_v5.csv');
    const svg = renderScalingSvg(
      rows,
      { ...DEFAULT_OPTIONS, logBase: 5 },
      'v5: G-count scaling',
    );
    expect(svg).toEqual(readFileSync(join(GOLDEN, 'scaling_v5.svg'), 'utf-8'));
  });

  it('omits the prob series when the column is empty', () => {
    const rows = loadRows('synthetic3.csv');
    const svg = renderScalingSvg(rows, { ...DEFAULT_OPTIONS, logBase: 5 }, 't');
    expect(svg).not.toContain('stroke-dasharray="3,3"');
  });

  it('draws dashed prob series when present', () => {
    const rows = loadRows('scaling_v5.csv');
    const svg = renderScalingSvg(rows, { ...DEFAULT_OPTIONS, logBase: 5 }, 't');
    expect(svg).toContain('stroke-dasharray="3,3"');
  });

  it('synthetic slope-3 data hugs the s=3 reference line', () => {
    // the fitted legend slope must round to the reference value
    const rows = loadRows('synthetic3.csv');
    const svg = renderScalingSvg(rows, { ...DEFAULT_OPTIONS, logBase: 5 }, 't');
    const m = svg.match(/ideal3 \(slope ([0-9.]+)\)/);
    expect(m).not.toBeNull();
    expect(Math.abs(Number(m![1]) - 3)).toBeLessThan(0.45);
    expect(svg).toContain('s=3');
  });
});

describe('runReport end to end', () => {
  it('renders byte-identically across runs and matches goldens', () => {
    const out1 = mkdtempSync(join(tmpdir(), 'rep1-'));
    const out2 = mkdtempSync(join(tmpdir(), 'rep2-'));
    const spec = (out: string) => ({
      csvPaths: [join(FIXTURES, 'scaling_v5.csv')],
      summaryPath: join(FIXTURES, 'scaling_v5.json'),
      outDir: out,
      options: DEFAULT_OPTIONS,
    });
    expect(runReport(spec(out1))).toBe(0);
    expect(runReport(spec(out2))).toBe(0);
    const md1 = readFileSync(join(out1, 'report.md'), 'utf-8');
    expect(md1).toEqual(readFileSync(join(out2, 'report.md'), 'utf-8'));
    expect(readFileSync(join(out1, 'scaling_v5.svg'), 'utf-8')).toEqual(
      readFileSync(join(out2, 'scaling_v5.svg'), 'utf-8'),
    );
    // golden comparison (paths inside the md are fixture-relative)
    const goldenMd = readFileSync(join(GOLDEN, 'report.md'), 'utf-8');
    expect(md1.replace(/`[^`]*scaling_v5\.csv`/, '`scaling_v5.csv`')).toEqual(
      goldenMd.replace(/`[^`]*scaling_v5\.csv`/, '`scaling_v5.csv`'),
    );
  });

  it('slope table equals the CLI JSON summary', () => {
    const out = mkdtempSync(join(tmpdir(), 'rep3-'));
    const code = runReport({
      csvPaths: [join(FIXTURES, 'scaling_v5.csv')],
      summaryPath: join(FIXTURES, 'scaling_v5.json'),
      outDir: out,
      options: DEFAULT_OPTIONS,
    });
    expect(code).toBe(0);
    const md = readFileSync(join(out, 'report.md'), 'utf-8');
    const summary = JSON.parse(
      readFileSync(join(FIXTURES, 'scaling_v5.json'), 'utf-8'),
    ) as RunSummary;
    for (const [tid, slope] of Object.entries(summary.slopes)) {
      if (slope === null) continue;
      expect(md).toContain(`| ${tid} | ${slope.toFixed(6)} | ${slope.toFixed(6)} | yes |`);
    }
  });

  it('fails with nonzero exit when the summary JSON is missing', () => {
    const out = mkdtempSync(join(tmpdir(), 'rep4-'));
    const code = runReport({
      csvPaths: [join(FIXTURES, 'scaling_v5.csv')],
      summaryPath: join(FIXTURES, 'does_not_exist.json'),
      outDir: out,
      options: DEFAULT_OPTIONS,
    });
    expect(code).toBe(1);
  });

  it('fails when slopes disagree with the summary', () => {
    const out = mkdtempSync(join(tmpdir(), 'rep5-'));
    const code = runReport({
      csvPaths: [join(FIXTURES, 'scaling_v5.csv')],
      summaryPath: join(FIXTURES, 'synthetic3.json'), // wrong summary
      outDir: out,
      options: DEFAULT_OPTIONS,
    });
    expect(code).toBe(1);
  });
});
