import type { FitResult } from './fit.js';
import type { ExcursionRow, HoleRecord } from './schema.js';

const W = 560;
const H = 360;
const PAD = 52;

function svgDoc(body: string, title: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${W}" height="${H}" viewBox="0 0 ${W} ${H}">\n` +
    `<rect width="${W}" height="${H}" fill="white"/>\n` +
    `<text x="${W / 2}" y="18" text-anchor="middle" font-family="sans-serif" font-size="13">${title}</text>\n` +
    body +
    '\n</svg>\n'
  );
}

function scale(lo: number, hi: number, outLo: number, outHi: number) {
  const span = hi - lo || 1;
  return (v: number) => outLo + ((v - lo) / span) * (outHi - outLo);
}

export function fitFigure(fit: FitResult): string {
  const xs = fit.points.map((p) => p.N);
  const ys = fit.points.map((p) => p.logMeanJ);
  const sx = scale(Math.min(...xs), Math.max(...xs), PAD, W - PAD);
  const sy = scale(Math.min(...ys), Math.max(...ys), H - PAD, PAD);
  const dots = fit.points
    .map((p) => `<circle cx="${sx(p.N).toFixed(1)}" cy="${sy(p.logMeanJ).toFixed(1)}" r="4" fill="steelblue"/>`)
    .join('\n');
  const x0 = Math.min(...xs);
  const x1 = Math.max(...xs);
  const line =
    `<line x1="${sx(x0).toFixed(1)}" y1="${sy(fit.intercept + fit.slope * x0).toFixed(1)}" ` +
    `x2="${sx(x1).toFixed(1)}" y2="${sy(fit.intercept + fit.slope * x1).toFixed(1)}" ` +
    'stroke="crimson" stroke-width="1.5"/>';
  const label =
    `<text x="${PAD}" y="${H - 14}" font-family="sans-serif" font-size="11">` +
    `slope ${fit.slope.toPrecision(6)} (band ${fit.band[0].toPrecision(4)} .. ${fit.band[1].toPrecision(4)})</text>`;
  return svgDoc(`${dots}\n${line}\n${label}`, 'log mean J vs N');
}

export interface HoleClassSummary {
  name: string;
  attempts: number;
  exceedRate: number | null;
  meanH: number | null;
  histogram: number[]; // counts of H = 0..a
}

export interface HoleAnalysis {
  a: number;
  attempts: number;
  classes: HoleClassSummary[];
  svg: string;
}

export function zoneWidthOf(traces: HoleRecord[]): number {
  // failures always park the hole at the zone top, so the observed maximum
  // of H over failures (or over all records) recovers a
  let a = 0;
  for (const t of traces) {
    if (t.H > a) a = t.H;
  }
  return a;
}

/** Histogram of post-attempt hole positions per previous-position class. */
export function analyzeHoles(traces: HoleRecord[], a?: number): HoleAnalysis {
  const width = a ?? zoneWidthOf(traces);
  const half = width / 2;
  const prev = new Map<number, number>();
  const classes: Record<string, { hist: number[]; sum: number; exceed: number; total: number }> = {
    low_or_top: { hist: new Array(width + 1).fill(0), sum: 0, exceed: 0, total: 0 },
    middle: { hist: new Array(width + 1).fill(0), sum: 0, exceed: 0, total: 0 },
  };
  const ordered = [...traces].sort((x, y) => x.j - y.j);
  for (const rec of ordered) {
    const hPrev = prev.get(rec.pblock) ?? 0;
    const cls = hPrev > half && hPrev < width ? 'middle' : 'low_or_top';
    const bucket = classes[cls];
    bucket.hist[rec.H] += 1;
    bucket.sum += rec.H;
    bucket.total += 1;
    if (rec.H > half) bucket.exceed += 1;
    prev.set(rec.pblock, rec.H);
  }
  const summaries: HoleClassSummary[] = Object.entries(classes).map(([name, c]) => ({
    name,
    attempts: c.total,
    exceedRate: c.total ? c.exceed / c.total : null,
    meanH: c.total ? c.sum / c.total : null,
    histogram: c.hist,
  }));
  const maxCount = Math.max(1, ...summaries.flatMap((s) => s.histogram));
  const bw = (W - 2 * PAD) / (width + 1) / 2 - 2;
  const bars: string[] = [];
  summaries.forEach((s, ci) => {
    const fill = ci === 0 ? 'steelblue' : 'darkorange';
    s.histogram.forEach((count, h) => {
      const x = PAD + (h * 2 + ci) * (bw + 2);
      const barH = ((H - 2 * PAD) * count) / maxCount;
      bars.push(
        `<rect x="${x.toFixed(1)}" y="${(H - PAD - barH).toFixed(1)}" width="${bw.toFixed(1)}" height="${barH.toFixed(1)}" fill="${fill}"/>`,
      );
    });
  });
  const legend =
    `<text x="${PAD}" y="${H - 14}" font-family="sans-serif" font-size="11">` +
    'blue: previous H in [0,a/2] or a; orange: previous H in (a/2,a)</text>';
  return {
    a: width,
    attempts: ordered.length,
    classes: summaries,
    svg: svgDoc(bars.join('\n') + '\n' + legend, 'hole position after attempt, by previous-position class'),
  };
}

export interface ExcursionAnalysis {
  rows: ExcursionRow[];
  maxAbsDev: number;
  svg: string;
}

/** Overlay of the empirical excursion-minimum law on 1/(k(k+1)). */
export function analyzeExcursions(rows: ExcursionRow[]): ExcursionAnalysis {
  if (rows.length === 0) {
    throw new Error('excursion table is empty');
  }
  let maxAbsDev = 0;
  for (const r of rows) {
    maxAbsDev = Math.max(maxAbsDev, Math.abs(r.empirical - r.theory));
  }
  const sx = scale(1, rows[rows.length - 1].k, PAD, W - PAD);
  const sy = scale(0, Math.max(...rows.map((r) => r.theory)), H - PAD, PAD);
  const emp = rows
    .map((r) => `<circle cx="${sx(r.k).toFixed(1)}" cy="${sy(r.empirical).toFixed(1)}" r="3.5" fill="steelblue"/>`)
    .join('\n');
  const theory =
    '<polyline fill="none" stroke="crimson" stroke-width="1.5" points="' +
    rows.map((r) => `${sx(r.k).toFixed(1)},${sy(r.theory).toFixed(1)}`).join(' ') +
    '"/>';
  const label =
    `<text x="${PAD}" y="${H - 14}" font-family="sans-serif" font-size="11">` +
    `max |empirical - theory| = ${maxAbsDev.toPrecision(3)}</text>`;
  return { rows, maxAbsDev, svg: svgDoc(`${emp}\n${theory}\n${label}`, 'excursion-minimum law vs 1/(k(k+1))') };
}
