import { ScalingRow } from './types.js';

export const CSV_HEADER =
  'target_id,kind,eps,det_count,prob_count,best_distance,elapsed_ms';

export class CsvSchemaError extends Error {
  constructor(path: string, rowNumber: number, detail: string) {
    super(`${path}:${rowNumber}: ${detail}`);
    this.name = 'CsvSchemaError';
  }
}

function parseOptionalInt(
  field: string,
  path: string,
  row: number,
  name: string,
): number | null {
  if (field === '') return null;
  const v = Number(field);
  if (!Number.isInteger(v) || v < 0) {
    throw new CsvSchemaError(path, row, `${name} must be a nonnegative integer, got ${field}`);
  }
  return v;
}

/** Parse a scaling-run CSV; schema violations report the 1-based row number. */
export function parseScalingCsv(text: string, path: string): ScalingRow[] {
  const lines = text.split('\n').filter((l, i, arr) => !(l === '' && i === arr.length - 1));
  if (lines.length === 0 || lines[0] !== CSV_HEADER) {
    throw new CsvSchemaError(path, 1, `header must be exactly "${CSV_HEADER}"`);
  }
  const rows: ScalingRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const rowNum = i + 1;
    const parts = lines[i].split(',');
    if (parts.length !== 7) {
      throw new CsvSchemaError(path, rowNum, `expected 7 columns, got ${parts.length}`);
    }
    const [targetId, kind, epsS, detS, probS, distS, msS] = parts;
    if (targetId === '') throw new CsvSchemaError(path, rowNum, 'empty target_id');
    const eps = Number(epsS);
    if (!(eps > 0 && eps <= 1)) {
      throw new CsvSchemaError(path, rowNum, `eps must be in (0, 1], got ${epsS}`);
    }
    const bestDistance = Number(distS);
    if (!Number.isFinite(bestDistance) || bestDistance < 0 || bestDistance > 1) {
      throw new CsvSchemaError(path, rowNum, `best_distance outside [0, 1]: ${distS}`);
    }
    rows.push({
      targetId,
      kind,
      eps,
      detCount: parseOptionalInt(detS, path, rowNum, 'det_count'),
      probCount: parseOptionalInt(probS, path, rowNum, 'prob_count'),
      bestDistance,
      elapsedMs: parseOptionalInt(msS, path, rowNum, 'elapsed_ms'),
    });
  }
  return rows;
}

export function groupByTarget(rows: ScalingRow[]): Map<string, ScalingRow[]> {
  const out = new Map<string, ScalingRow[]>();
  for (const r of rows) {
    const bucket = out.get(r.targetId);
    if (bucket) bucket.push(r);
    else out.set(r.targetId, [r]);
  }
  return out;
}
