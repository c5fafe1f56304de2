import { groupByTarget } from './csv.js';
import { fitTarget, logInvEps } from './fit.js';
import { PlotOptions, ScalingRow } from './types.js';

const PALETTE = [
  '#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e',
  '#8c564b', '#e377c2', '#17becf', '#bcbd22', '#7f7f7f',
  '#aec7e8', '#ffbb78',
];

const MARGIN = { left: 56, right: 16, top: 20, bottom: 44 };

const f = (v: number): string => v.toFixed(2);

/** Deterministic SVG scatter of G-count vs log_p(1/ε) with reference slopes. */
export function renderScalingSvg(
  rows: ScalingRow[],
  opts: PlotOptions,
  title: string,
): string {
  const byTarget = groupByTarget(rows);
  const targets = [...byTarget.keys()].sort();
  const pts = rows.filter((r) => r.detCount !== null);
  if (pts.length === 0) throw new Error('no fitted rows to plot');
  const xs = pts.map((r) => logInvEps(r.eps, opts.logBase));
  const counts = pts
    .map((r) => r.detCount as number)
    .concat(pts.map((r) => r.probCount).filter((v): v is number => v !== null));
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  const yMin = 0;
  const yMax = Math.max(...counts, 1) + 1;
  const plotW = opts.width - MARGIN.left - MARGIN.right;
  const plotH = opts.height - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) =>
    MARGIN.left + ((x - xMin) / Math.max(1e-9, xMax - xMin)) * plotW;
  const sy = (y: number) =>
    MARGIN.top + plotH - ((y - yMin) / (yMax - yMin)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${opts.width}" height="${opts.height}" viewBox="0 0 ${opts.width} ${opts.height}">`,
    `<rect width="${opts.width}" height="${opts.height}" fill="white"/>`,
    `<text x="${f(opts.width / 2)}" y="14" text-anchor="middle" font-family="monospace" font-size="12">${escapeXml(title)}</text>`,
  );

  // axes
  const x0 = MARGIN.left;
  const y0 = MARGIN.top + plotH;
  parts.push(
    `<line x1="${f(x0)}" y1="${f(y0)}" x2="${f(x0 + plotW)}" y2="${f(y0)}" stroke="black"/>`,
    `<line x1="${f(x0)}" y1="${f(MARGIN.top)}" x2="${f(x0)}" y2="${f(y0)}" stroke="black"/>`,
    `<text x="${f(x0 + plotW / 2)}" y="${f(opts.height - 8)}" text-anchor="middle" font-family="monospace" font-size="11">log_${opts.logBase}(1/eps)</text>`,
    `<text x="14" y="${f(MARGIN.top + plotH / 2)}" text-anchor="middle" font-family="monospace" font-size="11" transform="rotate(-90 14 ${f(MARGIN.top + plotH / 2)})">G-count</text>`,
  );
  for (let y = yMin; y <= yMax; y += Math.max(1, Math.round((yMax - yMin) / 8))) {
    parts.push(
      `<line x1="${f(x0 - 3)}" y1="${f(sy(y))}" x2="${f(x0)}" y2="${f(sy(y))}" stroke="black"/>`,
      `<text x="${f(x0 - 6)}" y="${f(sy(y) + 3)}" text-anchor="end" font-family="monospace" font-size="10">${y}</text>`,
    );
  }
  const nxt = 5;
  for (let i = 0; i <= nxt; i++) {
    const x = xMin + ((xMax - xMin) * i) / nxt;
    parts.push(
      `<line x1="${f(sx(x))}" y1="${f(y0)}" x2="${f(sx(x))}" y2="${f(y0 + 3)}" stroke="black"/>`,
      `<text x="${f(sx(x))}" y="${f(y0 + 14)}" text-anchor="middle" font-family="monospace" font-size="10">${x.toFixed(2)}</text>`,
    );
  }

  // reference slope lines, anchored at the lower-left of the data
  const anchorY = Math.min(...pts.map((r) => r.detCount as number));
  for (const s of opts.referenceSlopes) {
    const yEnd = anchorY + s * (xMax - xMin);
    const yClip = Math.min(yEnd, yMax);
    const xClip = xMin + (yClip - anchorY) / s;
    parts.push(
      `<line x1="${f(sx(xMin))}" y1="${f(sy(anchorY))}" x2="${f(sx(xClip))}" y2="${f(sy(yClip))}" stroke="#999999" stroke-dasharray="6,3"/>`,
      `<text x="${f(sx(xClip) + 2)}" y="${f(sy(yClip) + 3)}" font-family="monospace" font-size="10" fill="#999999">s=${s}</text>`,
    );
  }

  // per-target series (det solid, prob dashed when present)
  targets.forEach((tid, i) => {
    const color = PALETTE[i % PALETTE.length];
    const trows = (byTarget.get(tid) ?? []).filter((r) => r.detCount !== null);
    const ordered = [...trows].sort(
      (a, b) => logInvEps(a.eps, opts.logBase) - logInvEps(b.eps, opts.logBase),
    );
    const line = ordered
      .map((r) => `${f(sx(logInvEps(r.eps, opts.logBase)))},${f(sy(r.detCount as number))}`)
      .join(' ');
    parts.push(`<polyline points="${line}" fill="none" stroke="${color}"/>`);
    for (const r of ordered) {
      parts.push(
        `<circle cx="${f(sx(logInvEps(r.eps, opts.logBase)))}" cy="${f(sy(r.detCount as number))}" r="2.5" fill="${color}"/>`,
      );
    }
    const probRows = ordered.filter((r) => r.probCount !== null);
    if (probRows.length >= 2) {
      const probLine = probRows
        .map((r) => `${f(sx(logInvEps(r.eps, opts.logBase)))},${f(sy(r.probCount as number))}`)
        .join(' ');
      parts.push(
        `<polyline points="${probLine}" fill="none" stroke="${color}" stroke-dasharray="3,3"/>`,
      );
    }
  });

  // legend with fitted slopes
  targets.forEach((tid, i) => {
    const color = PALETTE[i % PALETTE.length];
    const fit = fitTarget(byTarget.get(tid) ?? [], opts.logBase);
    const label = fit === null ? tid : `${tid} (slope ${fit.slope.toFixed(2)})`;
    const ly = MARGIN.top + 12 + i * 13;
    parts.push(
      `<line x1="${f(x0 + 8)}" y1="${f(ly - 3)}" x2="${f(x0 + 24)}" y2="${f(ly - 3)}" stroke="${color}"/>`,
      `<text x="${f(x0 + 28)}" y="${f(ly)}" font-family="monospace" font-size="10">${escapeXml(label)}</text>`,
    );
  });

  parts.push('</svg>');
  return parts.join('\n') + '\n';
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}
