#!/usr/bin/env node
import fs from "node:fs";

import { FIGURE_METRICS, FigureKind } from "./columns";
import { ColumnMismatchError, parseRows } from "./parse";
import { render } from "./svg";
import { renderSummary } from "./summary";

const USAGE = [
    "usage: aon-plot --kind <mmse|dn|pred-entropy|summary> --in <results.csv|jsonl> --out <file>",
    "",
    "options:",
    "  --kind <kind>     figure to render (summary writes plain text)",
    "  --in <path>       sweep harness output, CSV or JSON-lines",
    "  --out <path>      output file (SVG for figures, text for summary)",
    "  --title <text>    figure title override",
    "  --no-error-bars   draw the curve without error bars",
].join("\n");

interface CliOptions {
    kind: string;
    input: string;
    output: string;
    title?: string;
    errorBars: boolean;
}

function parseArgs(argv: string[]): CliOptions {
    const opts: CliOptions = { kind: "", input: "", output: "", errorBars: true };
    for (let i = 0; i < argv.length; i++) {
        const arg = argv[i];
        const next = () => {
            i += 1;
            if (i >= argv.length) throw new Error(`flag ${arg} needs a value`);
            return argv[i];
        };
        if (arg === "--kind") opts.kind = next();
        else if (arg === "--in") opts.input = next();
        else if (arg === "--out") opts.output = next();
        else if (arg === "--title") opts.title = next();
        else if (arg === "--no-error-bars") opts.errorBars = false;
        else if (arg === "--help" || arg === "-h") throw new UsageRequested();
        else throw new Error(`unknown flag ${arg}`);
    }
    if (!opts.kind || !opts.input || !opts.output) {
        throw new Error("--kind, --in and --out are all required");
    }
    const kinds = [...Object.keys(FIGURE_METRICS), "summary"];
    if (!kinds.includes(opts.kind)) {
        throw new Error(`--kind must be one of ${kinds.join(", ")}`);
    }
    return opts;
}

class UsageRequested extends Error {}

export function run(argv: string[]): number {
    let opts: CliOptions;
    try {
        opts = parseArgs(argv);
    } catch (err) {
        if (err instanceof UsageRequested) {
            process.stdout.write(USAGE + "\n");
            return 0;
        }
        process.stderr.write(`error: ${(err as Error).message}\n${USAGE}\n`);
        return 2;
    }
    try {
        const text = fs.readFileSync(opts.input, "utf-8");
        const rows = parseRows(text);
        const payload =
            opts.kind === "summary"
                ? renderSummary(rows, opts.input)
                : render(rows, {
                      kind: opts.kind as FigureKind,
                      title: opts.title,
                      errorBars: opts.errorBars,
                  });
        fs.writeFileSync(opts.output, payload);
        return 0;
    } catch (err) {
        if (err instanceof ColumnMismatchError) {
            process.stderr.write(`error: ${err.message}\n`);
        } else {
            process.stderr.write(`error: ${(err as Error).message}\n`);
        }
        return 1;
    }
}

if (require.main === module) {
    process.exit(run(process.argv.slice(2)));
}
