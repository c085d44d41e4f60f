import Papa from "papaparse";
import { z } from "zod";

/** Column order emitted by the sweep harness; parsing requires every column. */
export const CSV_COLUMNS = [
  "graph_kind",
  "N",
  "p",
  "F_analytic",
  "A_x_target",
  "A_x_realized",
  "A_d_target",
  "A_d_realized",
  "mode",
  "b_mean",
  "S",
  "predicted_D",
  "observed_mean_D",
  "observed_std_D",
  "observed_mean_L",
  "nodes_measured",
  "failures",
  "seed",
] as const;

export class SchemaMismatch extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaMismatch";
  }
}

export class EmptyData extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptyData";
  }
}

const rowSchema = z.object({
  graph_kind: z.string(),
  N: z.number(),
  p: z.number(),
  F_analytic: z.number(),
  A_x_target: z.number(),
  A_x_realized: z.number(),
  A_d_target: z.number(),
  A_d_realized: z.number(),
  mode: z.string(),
  b_mean: z.number(),
  S: z.number(),
  predicted_D: z.number(),
  observed_mean_D: z.number(),
  observed_std_D: z.number().min(0),
  observed_mean_L: z.number(),
  nodes_measured: z.number(),
  failures: z.number(),
  // 64-bit seeds don't round-trip through doubles; keep the raw string then
  seed: z.union([z.number(), z.string()]),
});

export type SweepRow = z.infer<typeof rowSchema>;

export const X_AXES = {
  SALIENCE: "F_analytic",
  DESCRIBED_AMBIGUITY: "A_x_realized",
  DESCRIPTOR_AMBIGUITY: "A_d_realized",
} as const;

export type XAxis = keyof typeof X_AXES;

export function parseSweepCsv(text: string): SweepRow[] {
  const parsed = Papa.parse<Record<string, unknown>>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaMismatch(`malformed CSV: ${parsed.errors[0].message}`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = CSV_COLUMNS.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new SchemaMismatch(`missing columns: ${missing.join(", ")}`);
  }
  if (parsed.data.length === 0) {
    throw new EmptyData("CSV contains a header but no data rows");
  }
  return parsed.data.map((raw, i) => {
    const checked = rowSchema.safeParse(raw);
    if (!checked.success) {
      const issue = checked.error.issues[0];
      throw new SchemaMismatch(
        `row ${i + 1}: ${issue.path.join(".")}: ${issue.message}`,
      );
    }
    return checked.data;
  });
}
