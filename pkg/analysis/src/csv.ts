import * as fs from 'node:fs';

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string, source: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${source}: file is empty`);
  }
  const header = lines[0].split(',');
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(',');
    if (cells.length !== header.length) {
      throw new Error(`${source}:${i + 2}: expected ${header.length} columns, got ${cells.length}`);
    }
    return cells;
  });
  return { header, rows };
}

export function readCsv(path: string): CsvTable {
  return parseCsv(fs.readFileSync(path, 'utf8'), path);
}

/** Column-name to index map; throws naming the first missing column. */
export function columnIndex(table: CsvTable, required: string[], source: string): Map<string, number> {
  const index = new Map<string, number>();
  for (const name of required) {
    const i = table.header.indexOf(name);
    if (i < 0) {
      throw new Error(`${source}: missing column "${name}"`);
    }
    index.set(name, i);
  }
  return index;
}

export function writeCsv(path: string, header: string[], rows: string[][]): void {
  const text = [header.join(','), ...rows.map((r) => r.join(','))].join('\n') + '\n';
  fs.writeFileSync(path, text);
}
