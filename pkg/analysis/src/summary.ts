import * as fs from 'node:fs';
import * as path from 'node:path';
import type { FitResult } from './fit.js';
import type { ExcursionAnalysis, HoleAnalysis } from './plots.js';
import type { SweepFrame } from './schema.js';

export interface SummaryRow {
  section: string;
  key: string;
  value: string;
}

// shortest round-trip decimal form; stable across runs and platforms
export function fmt(x: number | null): string {
  if (x === null) return '';
  return String(x);
}

export function buildSummary(frame: SweepFrame, fit: FitResult,
                             holes: HoleAnalysis | null,
                             excursions: ExcursionAnalysis | null): SummaryRow[] {
  const rows: SummaryRow[] = [];
  const add = (section: string, key: string, value: string | number | null) =>
    rows.push({ section, key, value: typeof value === 'string' ? value : fmt(value) });

  add('sweep', 'replica_rows', frame.replicas.length);
  add('sweep', 'mode_rows', frame.modes.length);
  add('sweep', 'budget_flagged', frame.budgetFlagged.length);

  add('fit', 'n_points', fit.points.length);
  add('fit', 'slope', fit.slope);
  add('fit', 'intercept', fit.intercept);
  add('fit', 'stderr_slope', fit.stderrSlope);
  add('fit', 'band_lo', fit.band[0]);
  add('fit', 'band_hi', fit.band[1]);
  for (const p of fit.points) {
    add('fit', `mean_J_at_N=${p.N}`, p.meanJ);
    add('fit', `replicas_at_N=${p.N}`, p.replicas);
  }

  if (holes) {
    add('holes', 'a', holes.a);
    add('holes', 'attempts', holes.attempts);
    for (const cls of holes.classes) {
      add('holes', `${cls.name}_attempts`, cls.attempts);
      add('holes', `${cls.name}_exceed_rate`, cls.exceedRate);
      add('holes', `${cls.name}_mean_H`, cls.meanH);
      cls.histogram.forEach((count, h) => add('holes', `${cls.name}_count_H=${h}`, count));
    }
  }

  if (excursions) {
    add('excursion', 'rows', excursions.rows.length);
    add('excursion', 'max_abs_dev', excursions.maxAbsDev);
    for (const r of excursions.rows.slice(0, 10)) {
      add('excursion', `k=${r.k}_empirical`, r.empirical);
      add('excursion', `k=${r.k}_theory`, r.theory);
    }
  }
  return rows;
}

export function summaryCsvText(rows: SummaryRow[]): string {
  return ['section,key,value', ...rows.map((r) => `${r.section},${r.key},${r.value}`)].join('\n') + '\n';
}

export function writeSummaryCsv(rows: SummaryRow[], outPath: string): void {
  fs.mkdirSync(path.dirname(outPath), { recursive: true });
  fs.writeFileSync(outPath, summaryCsvText(rows));
}
