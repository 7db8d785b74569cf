import * as fs from 'node:fs';
import * as path from 'node:path';
import { fitLogJvsN } from './fit.js';
import { analyzeExcursions, analyzeHoles, fitFigure } from './plots.js';
import { loadExcursionCsv, loadHoleTraces, loadSweepFrame } from './schema.js';
import { buildSummary, writeSummaryCsv } from './summary.js';

function argValue(argv: string[], flag: string): string | undefined {
  const i = argv.indexOf(flag);
  if (i >= 0 && i + 1 < argv.length) return argv[i + 1];
  const pref = argv.find((t) => t.startsWith(flag + '='));
  return pref ? pref.split('=')[1] : undefined;
}

export function run(argv: string[]): number {
  const replicas = argValue(argv, '--replicas');
  const modes = argValue(argv, '--modes');
  const traces = argValue(argv, '--traces');
  const excursions = argValue(argv, '--excursions');
  const out = argValue(argv, '--out');
  const aFlag = argValue(argv, '--a');
  if (!replicas || !modes || !out) {
    console.error('usage: cli --replicas replicas.csv --modes modes.csv --out dir'
      + ' [--traces holes.jsonl] [--excursions excursion.csv] [--a zone-width]');
    return 1;
  }
  try {
    fs.mkdirSync(out, { recursive: true });
    const frame = loadSweepFrame(replicas, modes);
    const fit = fitLogJvsN(frame);
    fs.writeFileSync(path.join(out, 'fit_logJ_vs_N.svg'), fitFigure(fit));

    let holes = null;
    if (traces) {
      holes = analyzeHoles(loadHoleTraces(traces), aFlag ? Number(aFlag) : undefined);
      fs.writeFileSync(path.join(out, 'hole_histogram.svg'), holes.svg);
    }
    let exc = null;
    if (excursions) {
      exc = analyzeExcursions(loadExcursionCsv(excursions));
      fs.writeFileSync(path.join(out, 'excursion_law.svg'), exc.svg);
    }
    const summary = buildSummary(frame, fit, holes, exc);
    writeSummaryCsv(summary, path.join(out, 'summary.csv'));
    console.log(`summary: ${path.join(out, 'summary.csv')}`);
    console.log(`fit slope: ${fit.slope} (band ${fit.band[0]} .. ${fit.band[1]})`);
    if (frame.budgetFlagged.length > 0) {
      console.log(`budget-capped replica rows: ${frame.budgetFlagged.length} (retained)`);
    }
    return 0;
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 1;
  }
}

const invokedDirectly = process.argv[1] && (
  process.argv[1].endsWith('cli.js') || process.argv[1].endsWith('cli.ts'));
if (invokedDirectly) {
  process.exit(run(process.argv.slice(2)));
}
