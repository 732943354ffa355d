/** Strict reader for the simulator's plain numeric CSV files. */

export class SchemaError extends Error {}

export interface Table {
    columns: string[];
    rows: string[][];
}

export function parseCsv(text: string): Table {
    const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
    if (lines.length < 2) {
        throw new SchemaError("CSV needs a header line and at least one data row");
    }
    const columns = lines[0].split(",");
    const rows = lines.slice(1).map((line, i) => {
        const cells = line.split(",");
        if (cells.length !== columns.length) {
            throw new SchemaError(
                `row ${i + 2} has ${cells.length} cells, expected ${columns.length}`);
        }
        return cells;
    });
    return { columns, rows };
}

/** Assert the exact column set (order included); diagnostics name both sides. */
export function requireColumns(table: Table, expected: string[]): void {
    if (expected.length !== table.columns.length
        || expected.some((c, i) => table.columns[i] !== c)) {
        throw new SchemaError(
            `column mismatch: expected [${expected.join(", ")}], `
            + `found [${table.columns.join(", ")}]`);
    }
}

export function numericColumn(table: Table, name: string): number[] {
    const idx = table.columns.indexOf(name);
    if (idx < 0) {
        throw new SchemaError(`missing column ${name} in [${table.columns.join(", ")}]`);
    }
    return table.rows.map((row, i) => {
        const v = Number(row[idx]);
        if (!Number.isFinite(v)) {
            throw new SchemaError(`row ${i + 2}, column ${name}: not a number: ${row[idx]}`);
        }
        return v;
    });
}

export function stringColumn(table: Table, name: string): string[] {
    const idx = table.columns.indexOf(name);
    if (idx < 0) {
        throw new SchemaError(`missing column ${name} in [${table.columns.join(", ")}]`);
    }
    return table.rows.map((row) => row[idx]);
}

/** Stable unique values in first-seen order (series grouping key). */
export function uniqueInOrder(values: string[]): string[] {
    const seen = new Set<string>();
    const out: string[] = [];
    for (const v of values) {
        if (!seen.has(v)) {
            seen.add(v);
            out.push(v);
        }
    }
    return out;
}
