/**
 * Minimal deterministic SVG assembly: fixed canvas sizes, fixed number
 * formatting, no timestamps or randomness, so identical inputs always
 * produce identical bytes.
 */

/** Pixel coordinate formatting: two decimals, trailing zeros stripped. */
export function fmt(x: number): string {
  let s = x.toFixed(2);
  if (s.includes(".")) {
    s = s.replace(/0+$/, "").replace(/\.$/, "");
  }
  return s === "-0" ? "0" : s;
}

/** Tick-value formatting: round away float noise, shortest decimal form. */
export function tickLabel(x: number): string {
  const cleaned = Number(x.toPrecision(10));
  return String(cleaned);
}

/** Round tick positions covering [lo, hi] with a 1/2/5 x 10^m step. */
export function niceTicks(lo: number, hi: number, count = 5): number[] {
  if (!(hi > lo)) {
    const pad = Math.max(1, Math.abs(lo) * 0.1);
    return niceTicks(lo - pad, lo + pad, count);
  }
  const rawStep = (hi - lo) / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag * 10;
  for (const m of [1, 2, 5]) {
    if (rawStep <= m * mag) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  const first = Math.ceil(lo / step) * step;
  for (let t = first; t <= hi + step * 1e-9; t += step) {
    ticks.push(Number(t.toPrecision(12)));
  }
  return ticks;
}

export function escapeText(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface Rect {
  x: number;
  y: number;
  w: number;
  h: number;
}

export const PALETTE = {
  coord1: "#2166ac", // blue
  coord2: "#c51b8a", // magenta
  main: "#333333",
  accent: "#e08214", // orange, reference lines
  extra: "#35978f", // teal, third curve when thresholds stack up
  grid: "#e0e0e0",
  frame: "#999999",
  text: "#222222",
};

export const CURVE_COLORS = [
  PALETTE.coord1,
  PALETTE.coord2,
  PALETTE.extra,
  PALETTE.accent,
  PALETTE.main,
];

const FONT = 'font-family="Helvetica, Arial, sans-serif"';

export interface PanelOptions {
  title: string;
  xLabel: string;
  yLabel: string;
}

/**
 * One framed plot area inside the canvas. Data is added with explicit
 * styles; the domain is fixed before rendering (auto-extended from data).
 */
export class Panel {
  private readonly rect: Rect;
  private readonly opts: PanelOptions;
  private xlo = Infinity;
  private xhi = -Infinity;
  private ylo = Infinity;
  private yhi = -Infinity;
  private readonly shapes: string[] = [];
  private readonly legendEntries: Array<[string, string]> = [];
  private readonly deferred: Array<() => string> = [];

  constructor(rect: Rect, opts: PanelOptions) {
    this.rect = rect;
    this.opts = opts;
  }

  private extend(points: ReadonlyArray<readonly [number, number]>): void {
    for (const [x, y] of points) {
      if (x < this.xlo) this.xlo = x;
      if (x > this.xhi) this.xhi = x;
      if (y < this.ylo) this.ylo = y;
      if (y > this.yhi) this.yhi = y;
    }
  }

  private domain(): { xlo: number; xhi: number; ylo: number; yhi: number } {
    let { xlo, xhi, ylo, yhi } = this;
    if (!isFinite(xlo)) {
      xlo = 0;
      xhi = 1;
    }
    if (!isFinite(ylo)) {
      ylo = 0;
      yhi = 1;
    }
    if (xhi <= xlo) {
      const pad = Math.max(1, Math.abs(xlo) * 0.1);
      xlo -= pad;
      xhi += pad;
    }
    if (yhi <= ylo) {
      const pad = Math.max(1, Math.abs(ylo) * 0.1);
      ylo -= pad;
      yhi += pad;
    } else {
      const pad = (yhi - ylo) * 0.06;
      ylo -= pad;
      yhi += pad;
    }
    return { xlo, xhi, ylo, yhi };
  }

  private mapper(): (x: number, y: number) => [number, number] {
    const { xlo, xhi, ylo, yhi } = this.domain();
    const { x, y, w, h } = this.rect;
    return (px, py) => [
      x + ((px - xlo) / (xhi - xlo)) * w,
      y + h - ((py - ylo) / (yhi - ylo)) * h,
    ];
  }

  line(
    points: ReadonlyArray<readonly [number, number]>,
    color: string,
    opts: { width?: number; dash?: string; label?: string } = {},
  ): void {
    this.extend(points);
    if (opts.label !== undefined) {
      this.legendEntries.push([opts.label, color]);
    }
    this.deferred.push(() => {
      const map = this.mapper();
      const coords = points
        .map(([px, py]) => {
          const [sx, sy] = map(px, py);
          return `${fmt(sx)},${fmt(sy)}`;
        })
        .join(" ");
      const dash = opts.dash ? ` stroke-dasharray="${opts.dash}"` : "";
      return `<polyline fill="none" stroke="${color}" stroke-width="${opts.width ?? 1.5}"${dash} points="${coords}"/>`;
    });
  }

  scatter(
    points: ReadonlyArray<readonly [number, number]>,
    color: string,
    opts: { r?: number; label?: string } = {},
  ): void {
    this.extend(points);
    if (opts.label !== undefined) {
      this.legendEntries.push([opts.label, color]);
    }
    this.deferred.push(() => {
      const map = this.mapper();
      return points
        .map(([px, py]) => {
          const [sx, sy] = map(px, py);
          return `<circle cx="${fmt(sx)}" cy="${fmt(sy)}" r="${opts.r ?? 2}" fill="${color}" fill-opacity="0.75"/>`;
        })
        .join("");
    });
  }

  /** Horizontal reference line at data value y (drawn across the panel). */
  hline(yval: number, color: string, opts: { dash?: string; label?: string } = {}): void {
    this.extend([
      [this.xlo === Infinity ? 0 : this.xlo, yval],
      [this.xhi === -Infinity ? 1 : this.xhi, yval],
    ]);
    if (opts.label !== undefined) {
      this.legendEntries.push([opts.label, color]);
    }
    this.deferred.push(() => {
      const map = this.mapper();
      const [, sy] = map(0, yval);
      const { x, w } = this.rect;
      return `<line x1="${fmt(x)}" y1="${fmt(sy)}" x2="${fmt(x + w)}" y2="${fmt(sy)}" stroke="${color}" stroke-width="1" stroke-dasharray="4 3"/>`;
    });
  }

  render(): string {
    const { x, y, w, h } = this.rect;
    const { xlo, xhi, ylo, yhi } = this.domain();
    const map = this.mapper();
    const out: string[] = [];
    const clipId = `clip-${fmt(x)}-${fmt(y)}`.replace(/\./g, "_");

    out.push(
      `<clipPath id="${clipId}"><rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}"/></clipPath>`,
    );

    for (const t of niceTicks(xlo, xhi)) {
      const [sx] = map(t, ylo);
      out.push(
        `<line x1="${fmt(sx)}" y1="${fmt(y)}" x2="${fmt(sx)}" y2="${fmt(y + h)}" stroke="${PALETTE.grid}" stroke-width="0.5"/>`,
      );
      out.push(
        `<text x="${fmt(sx)}" y="${fmt(y + h + 14)}" ${FONT} font-size="10" fill="${PALETTE.text}" text-anchor="middle">${escapeText(tickLabel(t))}</text>`,
      );
    }
    for (const t of niceTicks(ylo, yhi)) {
      const [, sy] = map(xlo, t);
      out.push(
        `<line x1="${fmt(x)}" y1="${fmt(sy)}" x2="${fmt(x + w)}" y2="${fmt(sy)}" stroke="${PALETTE.grid}" stroke-width="0.5"/>`,
      );
      out.push(
        `<text x="${fmt(x - 5)}" y="${fmt(sy + 3)}" ${FONT} font-size="10" fill="${PALETTE.text}" text-anchor="end">${escapeText(tickLabel(t))}</text>`,
      );
    }

    out.push(`<g clip-path="url(#${clipId})">`);
    for (const draw of this.deferred) {
      out.push(draw());
    }
    out.push("</g>");

    out.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="none" stroke="${PALETTE.frame}" stroke-width="1"/>`,
    );
    out.push(
      `<text x="${fmt(x + w / 2)}" y="${fmt(y - 8)}" ${FONT} font-size="12" fill="${PALETTE.text}" text-anchor="middle">${escapeText(this.opts.title)}</text>`,
    );
    out.push(
      `<text x="${fmt(x + w / 2)}" y="${fmt(y + h + 30)}" ${FONT} font-size="11" fill="${PALETTE.text}" text-anchor="middle">${escapeText(this.opts.xLabel)}</text>`,
    );
    out.push(
      `<text x="${fmt(x - 38)}" y="${fmt(y + h / 2)}" ${FONT} font-size="11" fill="${PALETTE.text}" text-anchor="middle" transform="rotate(-90 ${fmt(x - 38)} ${fmt(y + h / 2)})">${escapeText(this.opts.yLabel)}</text>`,
    );

    if (this.legendEntries.length > 0) {
      let ly = y + 8;
      for (const [label, color] of this.legendEntries) {
        out.push(
          `<line x1="${fmt(x + w - 86)}" y1="${fmt(ly + 4)}" x2="${fmt(x + w - 70)}" y2="${fmt(ly + 4)}" stroke="${color}" stroke-width="2"/>`,
        );
        out.push(
          `<text x="${fmt(x + w - 66)}" y="${fmt(ly + 7)}" ${FONT} font-size="9" fill="${PALETTE.text}">${escapeText(label)}</text>`,
        );
        ly += 13;
      }
    }
    return out.join("\n");
  }
}

/** Split the canvas into a margin-separated grid of panel rectangles. */
export function gridRects(
  width: number,
  height: number,
  cols: number,
  rows: number,
  margin = { left: 58, right: 16, top: 30, bottom: 46, hgap: 64, vgap: 56 },
): Rect[][] {
  const w = (width - margin.left - margin.right - (cols - 1) * margin.hgap) / cols;
  const h = (height - margin.top - margin.bottom - (rows - 1) * margin.vgap) / rows;
  const rects: Rect[][] = [];
  for (let r = 0; r < rows; r++) {
    const row: Rect[] = [];
    for (let c = 0; c < cols; c++) {
      row.push({
        x: margin.left + c * (w + margin.hgap),
        y: margin.top + r * (h + margin.vgap),
        w,
        h,
      });
    }
    rects.push(row);
  }
  return rects;
}

export function svgDocument(width: number, height: number, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect x="0" y="0" width="${width}" height="${height}" fill="#ffffff"/>`,
    body,
    "</svg>",
    "",
  ].join("\n");
}
