/** Shared --in/--out command line wrapper for the figure scripts. */

import { readFileSync, writeFileSync } from "fs";

import { SchemaError } from "./csv";
import { FigureKind, RENDERERS } from "./figures";

function parseArgs(argv: string[]): { input: string; output: string } | null {
    let input: string | undefined;
    let output: string | undefined;
    for (let i = 0; i < argv.length; i += 1) {
        if (argv[i] === "--in" && i + 1 < argv.length) {
            input = argv[++i];
        } else if (argv[i] === "--out" && i + 1 < argv.length) {
            output = argv[++i];
        } else {
            return null;
        }
    }
    return input && output ? { input, output } : null;
}

export function runFigure(kind: FigureKind, argv: string[]): number {
    const args = parseArgs(argv);
    if (!args) {
        process.stderr.write(`usage: plot_${kind} --in <csv> --out <svg>\n`);
        return 2;
    }
    let csv: string;
    try {
        csv = readFileSync(args.input, "utf-8");
    } catch (err) {
        process.stderr.write(`cannot read ${args.input}: ${String(err)}\n`);
        return 2;
    }
    try {
        writeFileSync(args.output, RENDERERS[kind](csv));
    } catch (err) {
        if (err instanceof SchemaError) {
            process.stderr.write(`${args.input}: ${err.message}\n`);
            return 1;
        }
        process.stderr.write(String(err) + "\n");
        return 1;
    }
    return 0;
}
