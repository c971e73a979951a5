import { spawnSync } from "node:child_process";
import { existsSync, mkdirSync, readdirSync } from "node:fs";
import { join } from "node:path";

export interface RunResult {
  exitCode: number;
  stderr: string;
  produced: string[];
}

export function listCsvFiles(dir: string): string[] {
  if (!existsSync(dir)) return [];
  return readdirSync(dir, { withFileTypes: true })
    .filter((entry) => entry.isFile() && entry.name.endsWith(".csv"))
    .map((entry) => entry.name)
    .sort();
}

/** Execute a generated script in an isolated working directory.
 *
 * Scripts bake absolute paths, so outputs land in `outputDir`; the isolated
 * cwd only shields the caller from stray relative writes.  A failing script
 * is reported through the exit code, never thrown.
 */
export function runGenerated(
  scriptPath: string,
  workdir: string,
  pythonCmd: string,
  outputDir: string,
): RunResult {
  mkdirSync(workdir, { recursive: true });
  const before = new Set(listCsvFiles(outputDir));
  const parts = pythonCmd.split(/\s+/).filter((p) => p.length > 0);
  const result = spawnSync(parts[0], [...parts.slice(1), scriptPath], {
    cwd: workdir,
    encoding: "utf-8",
    timeout: 120_000,
  });
  const exitCode = result.status ?? 1;
  const produced = listCsvFiles(outputDir).filter((name) => !before.has(name));
  return { exitCode, stderr: result.stderr ?? "", produced };
}

/** Run a toolchain subcommand (`python -m cpslint ...`); throws on failure. */
export function runCpslint(pythonCmd: string, args: string[], cwd?: string): string {
  const parts = pythonCmd.split(/\s+/).filter((p) => p.length > 0);
  const result = spawnSync(parts[0], [...parts.slice(1), "-m", "cpslint", ...args], {
    cwd,
    encoding: "utf-8",
    timeout: 300_000,
  });
  if (result.status !== 0) {
    throw new Error(
      `cpslint ${args.join(" ")} failed (${result.status}):\n${result.stderr}`,
    );
  }
  return result.stdout;
}

export function outputPath(dir: string, name: string): string {
  return join(dir, name);
}
