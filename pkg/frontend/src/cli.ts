#!/usr/bin/env node
/**
 * hrvplot — render an hrvlab detection report to an SVG figure.
 *
 *   hrvplot --report <dir> --layout <name> --out <fig.svg>
 *
 * Exit codes: 0 success, 1 usage error, 2 invalid/incompatible report.
 */
import { LAYOUT_NAMES } from "./layouts";
import { ReportError, UsageError } from "./report";
import { render } from "./index";

const USAGE = `usage: hrvplot --report <dir> --layout <name> --out <fig.svg> [--format svg]

layouts: ${LAYOUT_NAMES.join(", ")}`;

interface Parsed {
  report?: string;
  layout?: string;
  out?: string;
  format?: string;
  help?: boolean;
}

function parseArgs(argv: string[]): Parsed {
  const parsed: Parsed = {};
  const takesValue: Record<string, "report" | "layout" | "out" | "format"> = {
    "--report": "report",
    "--layout": "layout",
    "--out": "out",
    "--format": "format",
  };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]!;
    if (arg === "--help" || arg === "-h") {
      parsed.help = true;
      continue;
    }
    const key = takesValue[arg];
    if (key === undefined) {
      throw new UsageError(`unknown argument '${arg}'`);
    }
    const value = argv[i + 1];
    if (value === undefined) {
      throw new UsageError(`missing value for ${arg}`);
    }
    parsed[key] = value;
    i++;
  }
  return parsed;
}

export interface CliIo {
  stdout: (line: string) => void;
  stderr: (line: string) => void;
}

/** Run the CLI; returns the process exit code. */
export function runCli(argv: string[], io?: Partial<CliIo>): number {
  const stdout = io?.stdout ?? ((line: string) => process.stdout.write(line + "\n"));
  const stderr = io?.stderr ?? ((line: string) => process.stderr.write(line + "\n"));
  try {
    const args = parseArgs(argv);
    if (args.help || argv.length === 0) {
      stdout(USAGE);
      return args.help ? 0 : 1;
    }
    for (const field of ["report", "layout", "out"] as const) {
      if (args[field] === undefined) {
        throw new UsageError(`missing required argument --${field}`);
      }
    }
    render({
      report: args.report!,
      layout: args.layout!,
      out: args.out!,
      format: args.format,
    });
    stdout(`wrote ${args.out}`);
    return 0;
  } catch (e) {
    if (e instanceof UsageError) {
      stderr(`hrvplot: error: ${e.message}`);
      return 1;
    }
    if (e instanceof ReportError) {
      stderr(`hrvplot: error: ${e.message}`);
      return 2;
    }
    throw e;
  }
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
