#!/usr/bin/env node
import { readFileSync, writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { renderFigure } from "./chart";
import { parseSweepCsv, X_AXES, XAxis } from "./schema";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .scriptName("render_figures")
    .option("csv", { type: "string", demandOption: true, describe: "sweep CSV path" })
    .option("x", {
      type: "string",
      choices: Object.keys(X_AXES),
      default: "SALIENCE",
      describe: "column family to use as the x axis",
    })
    .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
    .option("title", { type: "string", default: "", describe: "chart title" })
    .strict()
    .parseSync();

  try {
    const rows = parseSweepCsv(readFileSync(args.csv, "utf-8"));
    const svg = renderFigure(rows, args.x as XAxis, { title: args.title });
    writeFileSync(args.out, svg);
    process.stderr.write(`wrote ${args.out}: ${rows.length} points\n`);
    return 0;
  } catch (err) {
    const e = err as Error;
    process.stderr.write(`error: ${e.name}: ${e.message}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(hideBin(process.argv)));
}
