import * as fs from 'node:fs';
import { columnIndex, parseCsv, readCsv } from './csv.js';

export const REPLICA_COLUMNS = [
  'n', 'a', 'K', 'N', 'lambda', 'zeta', 'seed', 'modes', 'J_total',
  'terminated_by', 'free_final', 'frozen_final', 'defects_final',
];

export const MODE_COLUMNS = [
  'n', 'a', 'lambda', 'zeta', 'seed', 'mode', 'J_delta', 'emissions',
  'condition1', 'free', 'frozen', 'defects', 'F_En', 'F_total',
];

export interface ReplicaRow {
  n: number;
  a: number;
  K: number;
  N: number;
  lambda: number;
  zeta: number;
  seed: string; // 64-bit, kept textual
  modes: number;
  jTotal: number;
  terminatedBy: string;
  freeFinal: number;
  frozenFinal: number;
  defectsFinal: number;
}

export interface ModeRow {
  n: number;
  mode: number;
  jDelta: number;
  emissions: number;
  condition1: boolean;
  free: number;
  frozen: number;
  defects: number;
}

export interface SweepFrame {
  replicas: ReplicaRow[];
  modes: ModeRow[];
  /** indices into replicas of budget-capped rows; kept in all computations */
  budgetFlagged: number[];
}

export function loadSweepFrameFromText(replicasText: string, modesText: string,
                                       replicasSource = 'replicas.csv',
                                       modesSource = 'modes.csv'): SweepFrame {
  const rep = parseCsv(replicasText, replicasSource);
  const repIdx = columnIndex(rep, REPLICA_COLUMNS, replicasSource);
  const replicas: ReplicaRow[] = rep.rows.map((cells) => ({
    n: Number(cells[repIdx.get('n')!]),
    a: Number(cells[repIdx.get('a')!]),
    K: Number(cells[repIdx.get('K')!]),
    N: Number(cells[repIdx.get('N')!]),
    lambda: Number(cells[repIdx.get('lambda')!]),
    zeta: Number(cells[repIdx.get('zeta')!]),
    seed: cells[repIdx.get('seed')!],
    modes: Number(cells[repIdx.get('modes')!]),
    jTotal: Number(cells[repIdx.get('J_total')!]),
    terminatedBy: cells[repIdx.get('terminated_by')!],
    freeFinal: Number(cells[repIdx.get('free_final')!]),
    frozenFinal: Number(cells[repIdx.get('frozen_final')!]),
    defectsFinal: Number(cells[repIdx.get('defects_final')!]),
  }));
  const mod = parseCsv(modesText, modesSource);
  const modIdx = columnIndex(mod, MODE_COLUMNS, modesSource);
  const modes: ModeRow[] = mod.rows.map((cells) => ({
    n: Number(cells[modIdx.get('n')!]),
    mode: Number(cells[modIdx.get('mode')!]),
    jDelta: Number(cells[modIdx.get('J_delta')!]),
    emissions: Number(cells[modIdx.get('emissions')!]),
    condition1: cells[modIdx.get('condition1')!] === '1',
    free: Number(cells[modIdx.get('free')!]),
    frozen: Number(cells[modIdx.get('frozen')!]),
    defects: Number(cells[modIdx.get('defects')!]),
  }));
  const budgetFlagged = replicas
    .map((r, i) => (r.terminatedBy === 'budget' ? i : -1))
    .filter((i) => i >= 0);
  return { replicas, modes, budgetFlagged };
}

export function loadSweepFrame(replicasPath: string, modesPath: string): SweepFrame {
  return loadSweepFrameFromText(
    fs.readFileSync(replicasPath, 'utf8'),
    fs.readFileSync(modesPath, 'utf8'),
    replicasPath,
    modesPath,
  );
}

export interface HoleRecord {
  block: number;
  pblock: number;
  j: number;
  H: number;
  T: number;
  outcome: string;
}

const HOLE_KEYS = ['block', 'pblock', 'j', 'H', 'T', 'outcome'];

export function loadHoleTraces(path: string): HoleRecord[] {
  const text = fs.readFileSync(path, 'utf8');
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${path}: file is empty`);
  }
  return lines.map((line, i) => {
    const rec = JSON.parse(line);
    for (const key of HOLE_KEYS) {
      if (!(key in rec)) {
        throw new Error(`${path}:${i + 1}: missing column "${key}"`);
      }
    }
    return rec as HoleRecord;
  });
}

export interface ExcursionRow {
  k: number;
  empirical: number;
  theory: number;
  samples: number;
}

export function loadExcursionCsv(path: string): ExcursionRow[] {
  const table = readCsv(path);
  const idx = columnIndex(table, ['k', 'empirical', 'theory', 'samples'], path);
  return table.rows.map((cells) => ({
    k: Number(cells[idx.get('k')!]),
    empirical: Number(cells[idx.get('empirical')!]),
    theory: Number(cells[idx.get('theory')!]),
    samples: Number(cells[idx.get('samples')!]),
  }));
}
