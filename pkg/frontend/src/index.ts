export { renderFigure, ChartOptions } from "./chart";
export {
  CSV_COLUMNS,
  EmptyData,
  parseSweepCsv,
  SchemaMismatch,
  SweepRow,
  X_AXES,
  XAxis,
} from "./schema";
