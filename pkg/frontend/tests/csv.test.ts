import { readFileSync } from 'node:fs';
import { join } from 'node:path';
import { describe, expect, it } from 'vitest';

import { CSV_HEADER, CsvSchemaError, parseScalingCsv } from '../src/csv.js';

const FIXTURES = join(__dirname, 'fixtures');

describe('parseScalingCsv', () => {
  it('parses the real fixture with prob counts', () => {
    const rows = parseScalingCsv(
      readFileSync(join(FIXTURES, 'scaling_v5.csv'), 'utf-8'),
      'scaling_v5.csv',
    );
    expect(rows).toHaveLength(20);
    expect(rows[0].targetId).toBe('haar0');
    expect(rows[0].detCount).toBe(1);
    expect(rows[0].probCount).toBe(0);
    expect(rows[0].elapsedMs).toBeNull();
  });

  it('parses empty optional columns as null', () => {
    const text = `${CSV_HEADER}\nu,haar,0.2,3,,0.1,\n`;
    const rows = parseScalingCsv(text, 'x.csv');
    expect(rows[0].probCount).toBeNull();
    expect(rows[0].elapsedMs).toBeNull();
  });

  it('rejects a wrong header with row number 1', () => {
    expect(() => parseScalingCsv('a,b,c\n', 'x.csv')).toThrowError(/x\.csv:1/);
  });

  it('rejects malformed rows with their row number', () => {
    const text = `${CSV_HEADER}\nu,haar,0.2,3,,0.1,\nu,haar,2.5,3,,0.1,\n`;
    try {
      parseScalingCsv(text, 'x.csv');
      expect.unreachable();
    } catch (err) {
      expect(err).toBeInstanceOf(CsvSchemaError);
      expect(String(err)).toContain('x.csv:3');
    }
  });

  it('rejects non-integer counts', () => {
    const text = `${CSV_HEADER}\nu,haar,0.2,3.5,,0.1,\n`;
    expect(() => parseScalingCsv(text, 'x.csv')).toThrowError(/det_count/);
  });
});
