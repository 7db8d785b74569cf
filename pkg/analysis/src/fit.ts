import type { SweepFrame } from './schema.js';

export interface FitPoint {
  N: number;
  meanJ: number;
  logMeanJ: number;
  replicas: number;
}

export interface FitResult {
  slope: number;
  intercept: number;
  stderrSlope: number;
  /** slope plus/minus two standard errors */
  band: [number, number];
  points: FitPoint[];
}

/** Least-squares fit of log(mean J) against ring size N. */
export function fitLogJvsN(frame: SweepFrame): FitResult {
  const byN = new Map<number, number[]>();
  for (const row of frame.replicas) {
    if (!byN.has(row.N)) byN.set(row.N, []);
    byN.get(row.N)!.push(row.jTotal);
  }
  if (byN.size < 3) {
    throw new Error(`fit needs at least 3 distinct N values, got ${byN.size}`);
  }
  const points: FitPoint[] = [...byN.entries()]
    .sort((a, b) => a[0] - b[0])
    .map(([N, js]) => {
      const meanJ = js.reduce((s, j) => s + j, 0) / js.length;
      return { N, meanJ, logMeanJ: Math.log(meanJ), replicas: js.length };
    });
  const m = points.length;
  const xbar = points.reduce((s, p) => s + p.N, 0) / m;
  const ybar = points.reduce((s, p) => s + p.logMeanJ, 0) / m;
  let sxx = 0;
  let sxy = 0;
  for (const p of points) {
    sxx += (p.N - xbar) * (p.N - xbar);
    sxy += (p.N - xbar) * (p.logMeanJ - ybar);
  }
  const slope = sxy / sxx;
  const intercept = ybar - slope * xbar;
  let ss = 0;
  for (const p of points) {
    const r = p.logMeanJ - (intercept + slope * p.N);
    ss += r * r;
  }
  const stderrSlope = m > 2 ? Math.sqrt(ss / (m - 2) / sxx) : 0;
  return {
    slope,
    intercept,
    stderrSlope,
    band: [slope - 2 * stderrSlope, slope + 2 * stderrSlope],
    points,
  };
}
