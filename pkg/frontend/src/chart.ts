import { EmptyData, SchemaMismatch, SweepRow, X_AXES, XAxis } from "./schema";

export interface ChartOptions {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
  title: string;
}

const DEFAULT_OPTIONS: ChartOptions = {
  width: 720,
  height: 480,
  margin: { top: 48, right: 32, bottom: 56, left: 64 },
  title: "",
};

const PREDICTED_COLOR = "#1f77b4";
const OBSERVED_COLOR = "#d62728";

const AXIS_LABELS: Record<XAxis, string> = {
  SALIENCE: "salience rate F (bits/arc)",
  DESCRIBED_AMBIGUITY: "described-name ambiguity A_x (bits)",
  DESCRIPTOR_AMBIGUITY: "descriptor-name ambiguity A_d (bits)",
};

/** Fixed-precision formatter so output bytes never depend on locale. */
function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  const s = v.toPrecision(6);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

function tickValues(min: number, max: number, count: number): number[] {
  if (max <= min) return [min];
  const span = max - min;
  const rawStep = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const ticks: number[] = [];
  for (let t = Math.ceil(min / step) * step; t <= max + 1e-12; t += step) {
    ticks.push(Math.abs(t) < step / 1e6 ? 0 : t);
  }
  return ticks;
}

interface Point {
  x: number;
  predicted: number;
  observed: number;
  std: number;
}

function toPoints(rows: SweepRow[], xAxis: XAxis): Point[] {
  const field = X_AXES[xAxis];
  const points = rows
    .map((r) => ({
      x: r[field],
      predicted: r.predicted_D,
      observed: r.observed_mean_D,
      std: r.observed_std_D,
    }))
    .sort((a, b) => a.x - b.x);
  for (let i = 1; i < points.length; i++) {
    if (points[i].x === points[i - 1].x) {
      throw new SchemaMismatch(
        `x values must be strictly ordered; duplicate at ${fmt(points[i].x)}`,
      );
    }
  }
  return points;
}

/**
 * Render one predicted-vs-observed chart as an SVG string.
 *
 * Pure function of its inputs: identical rows and options yield identical
 * bytes.  The predicted series is a line, the observed series is points
 * with +/- one-standard-deviation error bars.
 */
export function renderFigure(
  rows: SweepRow[],
  xAxis: XAxis,
  options: Partial<ChartOptions> = {},
): string {
  if (rows.length === 0) {
    throw new EmptyData("no rows to render");
  }
  const opt: ChartOptions = { ...DEFAULT_OPTIONS, ...options };
  const points = toPoints(rows, xAxis);

  const xs = points.map((p) => p.x);
  const ys = points.flatMap((p) => [
    p.predicted,
    p.observed - p.std,
    p.observed + p.std,
  ]).filter(Number.isFinite);
  let xMin = Math.min(...xs);
  let xMax = Math.max(...xs);
  let yMin = Math.min(0, ...ys);
  let yMax = Math.max(...ys);
  if (xMax === xMin) {
    xMin -= 0.5;
    xMax += 0.5;
  }
  if (yMax === yMin) {
    yMax = yMin + 1;
  }
  yMax += 0.05 * (yMax - yMin);

  const { width, height, margin } = opt;
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const px = (x: number) => margin.left + ((x - xMin) / (xMax - xMin)) * plotW;
  const py = (y: number) => margin.top + plotH - ((y - yMin) / (yMax - yMin)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}" font-family="sans-serif" font-size="12">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="#ffffff"/>`);
  if (opt.title) {
    parts.push(
      `<text x="${fmt(width / 2)}" y="24" text-anchor="middle" font-size="15">${escapeXml(opt.title)}</text>`,
    );
  }

  // grid and axis ticks
  for (const t of tickValues(yMin, yMax, 6)) {
    const y = fmt(py(t));
    parts.push(
      `<line x1="${fmt(margin.left)}" y1="${y}" x2="${fmt(margin.left + plotW)}" y2="${y}" stroke="#e0e0e0"/>`,
      `<text x="${fmt(margin.left - 8)}" y="${y}" text-anchor="end" dominant-baseline="middle">${fmt(t)}</text>`,
    );
  }
  for (const t of tickValues(xMin, xMax, 7)) {
    const x = fmt(px(t));
    parts.push(
      `<line x1="${x}" y1="${fmt(margin.top)}" x2="${x}" y2="${fmt(margin.top + plotH)}" stroke="#e0e0e0"/>`,
      `<text x="${x}" y="${fmt(margin.top + plotH + 18)}" text-anchor="middle">${fmt(t)}</text>`,
    );
  }
  parts.push(
    `<rect x="${fmt(margin.left)}" y="${fmt(margin.top)}" width="${fmt(plotW)}" height="${fmt(plotH)}" fill="none" stroke="#333333"/>`,
  );

  // axis labels
  parts.push(
    `<text x="${fmt(margin.left + plotW / 2)}" y="${fmt(height - 12)}" text-anchor="middle">${escapeXml(AXIS_LABELS[xAxis])}</text>`,
    `<text transform="translate(16 ${fmt(margin.top + plotH / 2)}) rotate(-90)" text-anchor="middle">description size D (descriptors)</text>`,
  );

  // predicted series: a line (single point degenerates to a marker)
  const lineCoords = points
    .map((p) => `${fmt(px(p.x))},${fmt(py(p.predicted))}`)
    .join(" ");
  parts.push(
    `<polyline class="predicted-line" points="${lineCoords}" fill="none" stroke="${PREDICTED_COLOR}" stroke-width="2"/>`,
  );
  for (const p of points) {
    parts.push(
      `<circle class="predicted-point" cx="${fmt(px(p.x))}" cy="${fmt(py(p.predicted))}" r="2.5" fill="${PREDICTED_COLOR}"/>`,
    );
  }

  // observed series: points with +/- one-standard-deviation error bars
  for (const p of points) {
    const x = fmt(px(p.x));
    const yLo = fmt(py(p.observed - p.std));
    const yHi = fmt(py(p.observed + p.std));
    parts.push(
      `<line class="error-bar" x1="${x}" y1="${yLo}" x2="${x}" y2="${yHi}" stroke="${OBSERVED_COLOR}" stroke-width="1.5"/>`,
      `<line class="error-cap" x1="${fmt(px(p.x) - 4)}" y1="${yLo}" x2="${fmt(px(p.x) + 4)}" y2="${yLo}" stroke="${OBSERVED_COLOR}" stroke-width="1.5"/>`,
      `<line class="error-cap" x1="${fmt(px(p.x) - 4)}" y1="${yHi}" x2="${fmt(px(p.x) + 4)}" y2="${yHi}" stroke="${OBSERVED_COLOR}" stroke-width="1.5"/>`,
      `<circle class="observed-point" cx="${x}" cy="${fmt(py(p.observed))}" r="3.5" fill="${OBSERVED_COLOR}"/>`,
    );
  }

  // legend
  const lx = margin.left + 12;
  const ly = margin.top + 12;
  parts.push(
    `<line x1="${fmt(lx)}" y1="${fmt(ly)}" x2="${fmt(lx + 24)}" y2="${fmt(ly)}" stroke="${PREDICTED_COLOR}" stroke-width="2"/>`,
    `<text x="${fmt(lx + 30)}" y="${fmt(ly)}" dominant-baseline="middle">predicted</text>`,
    `<circle cx="${fmt(lx + 12)}" cy="${fmt(ly + 18)}" r="3.5" fill="${OBSERVED_COLOR}"/>`,
    `<text x="${fmt(lx + 30)}" y="${fmt(ly + 18)}" dominant-baseline="middle">observed (mean &#177; std)</text>`,
  );

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
