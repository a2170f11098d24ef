import { HARNESS_COLUMNS, HarnessColumn, SweepRow } from "./columns";

/** Raised when the input columns do not match the harness contract. */
export class ColumnMismatchError extends Error {
    readonly missing: string[];
    readonly unexpected: string[];

    constructor(missing: string[], unexpected: string[]) {
        const parts: string[] = [];
        if (missing.length > 0) parts.push(`missing column(s): ${missing.join(", ")}`);
        if (unexpected.length > 0) parts.push(`unexpected column(s): ${unexpected.join(", ")}`);
        super(parts.join("; "));
        this.name = "ColumnMismatchError";
        this.missing = missing;
        this.unexpected = unexpected;
    }
}

function checkColumns(found: string[]): void {
    const expected = new Set<string>(HARNESS_COLUMNS);
    const present = new Set(found);
    const missing = HARNESS_COLUMNS.filter((c) => !present.has(c));
    const unexpected = found.filter((c) => !expected.has(c));
    if (missing.length > 0 || unexpected.length > 0) {
        throw new ColumnMismatchError(missing, unexpected);
    }
}

function toNumber(raw: string | number | undefined, column: string, line: number): number {
    const value = typeof raw === "number" ? raw : Number(raw);
    if (raw === undefined || raw === "" || Number.isNaN(value)) {
        throw new Error(`line ${line}: column ${column} is not numeric (got ${String(raw)})`);
    }
    return value;
}

function parseCsv(text: string): SweepRow[] {
    const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
    if (lines.length === 0) throw new Error("input is empty");
    const header = lines[0].split(",").map((c) => c.trim());
    checkColumns(header);
    return lines.slice(1).map((line, i) => {
        const cells = line.split(",");
        if (cells.length !== header.length) {
            throw new Error(`line ${i + 2}: expected ${header.length} cells, got ${cells.length}`);
        }
        const row = {} as SweepRow;
        header.forEach((column, j) => {
            row[column as HarnessColumn] = toNumber(cells[j], column, i + 2);
        });
        return row;
    });
}

function parseJsonLines(text: string): SweepRow[] {
    const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
    return lines.map((line, i) => {
        let record: Record<string, unknown>;
        try {
            record = JSON.parse(line);
        } catch {
            throw new Error(`line ${i + 1}: invalid JSON`);
        }
        checkColumns(Object.keys(record));
        const row = {} as SweepRow;
        for (const column of HARNESS_COLUMNS) {
            row[column] = toNumber(record[column] as string | number, column, i + 1);
        }
        return row;
    });
}

/** Parse harness output, auto-detecting CSV vs JSON-lines. */
export function parseRows(text: string): SweepRow[] {
    const head = text.trimStart();
    if (head.length === 0) throw new Error("input is empty");
    const rows = head.startsWith("{") ? parseJsonLines(text) : parseCsv(text);
    if (rows.length === 0) throw new Error("input has a header but no data rows");
    return rows;
}
