/**
 * The three figure layouts. Each consumes a parsed detection report and
 * returns a complete SVG document string.
 *
 * - ex31-panel: marginal Hill plots on top; Hill of min(Z1,Z2) bottom
 *   left; exponential QQ of the thresholded log max-ratio bottom right.
 * - ex32-panel: same top and bottom left; bottom right is the Hill plot
 *   of the thresholded max-ratio, one curve per threshold.
 * - data-analysis-panel: 3x3 battery — marginals / angular density /
 *   min-Hill on top, then one row per polar branch with the two Hillish
 *   variants and the Pickandsish trace.
 */
import {
  Report,
  ReportError,
  UsageError,
  densityOf,
  labelNumber,
  qqOf,
  seriesOf,
} from "./report";
import {
  CURVE_COLORS,
  PALETTE,
  Panel,
  Rect,
  gridRects,
  svgDocument,
} from "./svg";

export const LAYOUT_NAMES = ["ex31-panel", "ex32-panel", "data-analysis-panel"] as const;
export type LayoutName = (typeof LAYOUT_NAMES)[number];

function smallestThreshold(report: Report): number {
  const ts = report.meta.thresholds;
  if (ts.length === 0) {
    throw new ReportError("report has no ratio thresholds (meta.thresholds is empty)");
  }
  return Math.min(...ts);
}

function firstQ(report: Report): number {
  const qs = report.meta.q_list;
  if (qs.length === 0) {
    throw new ReportError("report has no Pickandsish quantiles (meta.q_list is empty)");
  }
  const q = qs[0];
  if (q === undefined) {
    throw new ReportError("report has no Pickandsish quantiles (meta.q_list is empty)");
  }
  return q;
}

function marginalHillPanel(report: Report, rect: Rect): Panel {
  const panel = new Panel(rect, {
    title: "Hill plots of the marginals",
    xLabel: "k (order statistics)",
    yLabel: "alpha-hat",
  });
  panel.line(seriesOf(report, "marginal_hill_1"), PALETTE.coord1, { label: "Z1" });
  panel.line(seriesOf(report, "marginal_hill_2"), PALETTE.coord2, { label: "Z2" });
  return panel;
}

function minHillPanel(report: Report, rect: Rect): Panel {
  const panel = new Panel(rect, {
    title: "Hill plot of min(Z1, Z2)",
    xLabel: "k (order statistics)",
    yLabel: "alpha-hat",
  });
  panel.line(seriesOf(report, "min_hill"), PALETTE.main);
  return panel;
}

function qqPanel(report: Report, rect: Rect): Panel {
  const t = smallestThreshold(report);
  const points = qqOf(report, `qq_log_ratio_max@k${labelNumber(t)}`);
  const panel = new Panel(rect, {
    title: `Exponential QQ: log max-ratio, top ${labelNumber(t)} by min`,
    xLabel: "exponential quantiles",
    yLabel: "ordered log max(Z1/Z2, Z2/Z1)",
  });
  panel.scatter(points, PALETTE.main);
  if (points.length >= 2) {
    // least-squares reference line through the QQ points
    const n = points.length;
    let sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const [px, py] of points) {
      sx += px;
      sy += py;
      sxx += px * px;
      sxy += px * py;
    }
    const denom = n * sxx - sx * sx;
    if (denom > 0) {
      const slope = (n * sxy - sx * sy) / denom;
      const intercept = (sy - slope * sx) / n;
      const x0 = points[0]![0];
      const x1 = points[n - 1]![0];
      panel.line(
        [
          [x0, intercept + slope * x0],
          [x1, intercept + slope * x1],
        ],
        PALETTE.accent,
        { label: `ls slope ${labelNumber(Number(slope.toPrecision(3)))}` },
      );
    }
  }
  return panel;
}

function ratioHillPanel(report: Report, rect: Rect): Panel {
  const panel = new Panel(rect, {
    title: "Hill plot of max(Z1/Z2, Z2/Z1), thresholded by min",
    xLabel: "k (order statistics)",
    yLabel: "alpha-hat",
  });
  const ts = [...report.meta.thresholds].sort((a, b) => a - b);
  if (ts.length === 0) {
    throw new ReportError("report has no ratio thresholds (meta.thresholds is empty)");
  }
  ts.forEach((t, i) => {
    panel.line(
      seriesOf(report, `ratio_tail_hill_max@k${labelNumber(t)}`),
      CURVE_COLORS[i % CURVE_COLORS.length]!,
      { label: `top ${labelNumber(t)}` },
    );
  });
  return panel;
}

function angularDensityPanel(report: Report, rect: Rect): Panel {
  const d = densityOf(report, "angular_density");
  const panel = new Panel(rect, {
    title: "Angular density",
    xLabel: "angle (0 = horizontal axis, 1 = vertical)",
    yLabel: "density",
  });
  const points: Array<[number, number]> = d.x.map((x, i) => [x, d.density[i] ?? 0]);
  panel.line(points, PALETTE.main);
  return panel;
}

function hillishPanel(report: Report, rect: Rect, branch: 1 | 2, sign: "pos" | "neg"): Panel {
  const branchTitle = branch === 1 ? "Z1 > Z2" : "Z2 > Z1";
  const angle = sign === "pos" ? `theta_${branch}` : `-theta_${branch}`;
  const panel = new Panel(rect, {
    title: `Hillish (A, ${angle})  [${branchTitle}]`,
    xLabel: "k (order statistics)",
    yLabel: "Hillish",
  });
  panel.line(
    seriesOf(report, `hillish_${sign}_${branch}`),
    branch === 1 ? PALETTE.coord1 : PALETTE.coord2,
  );
  panel.hline(1, PALETTE.accent, { label: "limit 1" });
  return panel;
}

function pickandsishPanel(report: Report, rect: Rect, branch: 1 | 2): Panel {
  const q = firstQ(report);
  const branchTitle = branch === 1 ? "Z1 > Z2" : "Z2 > Z1";
  const panel = new Panel(rect, {
    title: `Pickandsish q=${labelNumber(q)}  [${branchTitle}]`,
    xLabel: "k (order statistics)",
    yLabel: "Pickandsish",
  });
  panel.line(
    seriesOf(report, `pickandsish_${branch}@q${labelNumber(q)}`),
    branch === 1 ? PALETTE.coord1 : PALETTE.coord2,
  );
  panel.hline(0, PALETTE.accent, { label: "limit 0" });
  return panel;
}

const WIDTH = 960;

function renderTwoByTwo(report: Report, bottomRight: (r: Report, rect: Rect) => Panel): string {
  const height = 640;
  const rects = gridRects(WIDTH, height, 2, 2);
  const bottomLeft = rects[1]![0]!;
  const bottomRightRect = rects[1]![1]!;
  const topSpan: Rect = {
    x: rects[0]![0]!.x,
    y: rects[0]![0]!.y,
    w: bottomRightRect.x + bottomRightRect.w - rects[0]![0]!.x,
    h: rects[0]![0]!.h,
  };
  const panels = [
    marginalHillPanel(report, topSpan),
    minHillPanel(report, bottomLeft),
    bottomRight(report, bottomRightRect),
  ];
  return svgDocument(WIDTH, height, panels.map((p) => p.render()).join("\n"));
}

export function renderEx31Panel(report: Report): string {
  return renderTwoByTwo(report, qqPanel);
}

export function renderEx32Panel(report: Report): string {
  return renderTwoByTwo(report, ratioHillPanel);
}

export function renderDataAnalysisPanel(report: Report): string {
  const height = 880;
  const rects = gridRects(WIDTH, height, 3, 3);
  const panels = [
    marginalHillPanel(report, rects[0]![0]!),
    angularDensityPanel(report, rects[0]![1]!),
    minHillPanel(report, rects[0]![2]!),
    hillishPanel(report, rects[1]![0]!, 1, "pos"),
    hillishPanel(report, rects[1]![1]!, 1, "neg"),
    pickandsishPanel(report, rects[1]![2]!, 1),
    hillishPanel(report, rects[2]![0]!, 2, "pos"),
    hillishPanel(report, rects[2]![1]!, 2, "neg"),
    pickandsishPanel(report, rects[2]![2]!, 2),
  ];
  return svgDocument(WIDTH, height, panels.map((p) => p.render()).join("\n"));
}

const RENDERERS: Record<LayoutName, (report: Report) => string> = {
  "ex31-panel": renderEx31Panel,
  "ex32-panel": renderEx32Panel,
  "data-analysis-panel": renderDataAnalysisPanel,
};

export function renderLayout(report: Report, layout: string): string {
  const renderer = RENDERERS[layout as LayoutName];
  if (renderer === undefined) {
    throw new UsageError(
      `unknown layout '${layout}' (choose from: ${LAYOUT_NAMES.join(", ")})`,
    );
  }
  return renderer(report);
}
