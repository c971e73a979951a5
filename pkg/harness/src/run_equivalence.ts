/** Back-end equivalence gate.
 *
 * Usage: run_equivalence <corpus-dir> <config.yaml> [--rows N] [--tolerance T]
 *
 * Builds the reference fixture plus one corrupted variant per corruption
 * kind, runs every corpus program through the interpreter pipeline and
 * through a generated script, and requires the outputs to match at the
 * numeric tolerance.  Exits nonzero on any inequivalence.
 */

import { mkdirSync, readdirSync, writeFileSync } from "node:fs";
import { join, resolve } from "node:path";
import { readRunConfig, RunConfig } from "./config";
import { DEFAULT_TOLERANCE, diffCsv } from "./diff";
import { listCsvFiles, runCpslint, runGenerated } from "./runner";

const CORRUPTION_KINDS = [
  "type-mismatch",
  "type-mismatch-uart",
  "out-of-bounds",
  "out-of-order-keep-timestamps",
  "out-of-order-new-timestamps",
  "missing-fields",
  "missing-rows",
  "misplaced-eol",
];

const UART_TARGET = "image loader";

interface CaseResult {
  label: string;
  ok: boolean;
  detail: string;
}

function writeConfig(path: string, inputDir: string, outputDir: string,
                     pythonCmd: string, pipeline: string): void {
  const lines = [
    `input_dir: ${JSON.stringify(inputDir)}`,
    `output_dir: ${JSON.stringify(outputDir)}`,
    `python_cmd: ${JSON.stringify(pythonCmd)}`,
    `pipeline: ${pipeline}`,
    "",
  ];
  writeFileSync(path, lines.join("\n"), "utf-8");
}

function buildInputs(cfg: RunConfig, workRoot: string, rows: number): Map<string, string> {
  const variants = new Map<string, string>();
  const cleanDir = join(workRoot, "inputs", "clean");
  mkdirSync(cleanDir, { recursive: true });
  const reference = join(cleanDir, "ref.csv");
  runCpslint(cfg.pythonCmd, [
    "fixture", "--rows", String(rows), "--seed", "42", "--out", reference,
  ]);
  variants.set("clean", cleanDir);
  for (const kind of CORRUPTION_KINDS) {
    const dir = join(workRoot, "inputs", kind);
    mkdirSync(dir, { recursive: true });
    const args = [
      "corrupt", reference, "--kind", kind,
      "--rate", "0.005", "--block", "10", "--seed", "7",
      "--out", join(dir, "ref.csv"),
    ];
    if (kind === "type-mismatch-uart" || kind === "missing-rows") {
      args.push("--uart-target", UART_TARGET);
    }
    runCpslint(cfg.pythonCmd, args);
    variants.set(kind, dir);
  }
  return variants;
}

function runCase(cfg: RunConfig, workRoot: string, specPath: string,
                 specName: string, variant: string, inputDir: string,
                 tolerance: number): CaseResult {
  const label = `${specName} on ${variant}`;
  const caseDir = join(workRoot, "runs", specName, variant);
  const interpDir = join(caseDir, "interp");
  const compDir = join(caseDir, "comp");
  mkdirSync(interpDir, { recursive: true });
  mkdirSync(compDir, { recursive: true });

  try {
    const interpConfig = join(caseDir, "interp.yaml");
    writeConfig(interpConfig, inputDir, interpDir, cfg.pythonCmd, "interpreter");
    runCpslint(cfg.pythonCmd, ["run", specPath, "--config", interpConfig]);

    const compConfig = join(caseDir, "comp.yaml");
    writeConfig(compConfig, inputDir, compDir, cfg.pythonCmd, "compiler");
    const script = join(caseDir, "generated.py");
    runCpslint(cfg.pythonCmd, ["gen", specPath, "--config", compConfig, "--out", script]);
    const run = runGenerated(script, join(caseDir, "sandbox"), cfg.pythonCmd, compDir);
    if (run.exitCode !== 0) {
      return { label, ok: false, detail: `generated script failed:\n${run.stderr}` };
    }

    const interpFiles = listCsvFiles(interpDir);
    const compFiles = listCsvFiles(compDir);
    if (interpFiles.join(",") !== compFiles.join(",")) {
      return {
        label, ok: false,
        detail: `file sets differ: [${interpFiles}] vs [${compFiles}]`,
      };
    }
    for (const name of interpFiles) {
      const report = diffCsv(join(interpDir, name), join(compDir, name), tolerance);
      if (!report.equal) {
        return { label, ok: false, detail: `${name}: ${report.problems.join("; ")}` };
      }
    }
    return { label, ok: true, detail: `${interpFiles.length} file(s) equivalent` };
  } catch (error) {
    return { label, ok: false, detail: String(error) };
  }
}

export function main(argv: string[]): number {
  const positional: string[] = [];
  let rows = 10_000;
  let tolerance = DEFAULT_TOLERANCE;
  for (let i = 0; i < argv.length; i++) {
    if (argv[i] === "--rows") rows = Number(argv[++i]);
    else if (argv[i] === "--tolerance") tolerance = Number(argv[++i]);
    else positional.push(argv[i]);
  }
  if (positional.length !== 2) {
    console.error("usage: run_equivalence <corpus-dir> <config.yaml> "
      + "[--rows N] [--tolerance T]");
    return 2;
  }
  const [corpusDir, configPath] = positional.map((p) => resolve(p));
  const cfg = readRunConfig(configPath);
  const workRoot = cfg.outputDir;
  mkdirSync(workRoot, { recursive: true });

  const specs = readdirSync(corpusDir).filter((n) => n.endsWith(".cps")).sort();
  if (specs.length === 0) {
    console.error(`no .cps programs found in ${corpusDir}`);
    return 2;
  }

  console.log(`building inputs (${rows} rows, ${CORRUPTION_KINDS.length} corrupted variants)`);
  const variants = buildInputs(cfg, workRoot, rows);

  const results: CaseResult[] = [];
  for (const specName of specs) {
    for (const [variant, inputDir] of variants) {
      const result = runCase(cfg, workRoot, join(corpusDir, specName),
        specName, variant, inputDir, tolerance);
      console.log(`${result.ok ? "PASS" : "FAIL"}  ${result.label} (${result.detail})`);
      results.push(result);
    }
  }

  const failures = results.filter((r) => !r.ok);
  console.log(`\n${results.length - failures.length}/${results.length} cases equivalent`
    + ` at tolerance ${tolerance}`);
  if (failures.length > 0) {
    console.error(`${failures.length} inequivalent case(s)`);
    return 1;
  }
  return 0;
}

if (require.main === module) {
  process.exitCode = main(process.argv.slice(2));
}
