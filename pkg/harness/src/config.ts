import { readFileSync } from "node:fs";
import { dirname, isAbsolute, resolve } from "node:path";
import { parse } from "yaml";

export interface RunConfig {
  inputDir: string;
  outputDir: string;
  pythonCmd: string;
  pipeline: string;
}

/** Load the toolchain's run configuration; relative directories resolve
 *  against the config file's folder, mirroring the CLI's behaviour. */
export function readRunConfig(path: string): RunConfig {
  const raw = parse(readFileSync(path, "utf-8")) as Record<string, unknown>;
  if (raw === null || typeof raw !== "object") {
    throw new Error(`${path}: expected a mapping of configuration keys`);
  }
  for (const key of ["input_dir", "output_dir", "python_cmd"]) {
    if (!(key in raw)) throw new Error(`${path}: missing required key '${key}'`);
  }
  const base = dirname(resolve(path));
  const dir = (value: unknown): string => {
    const text = String(value);
    return isAbsolute(text) ? text : resolve(base, text);
  };
  return {
    inputDir: dir(raw.input_dir),
    outputDir: dir(raw.output_dir),
    pythonCmd: String(raw.python_cmd),
    pipeline: String(raw.pipeline ?? "compiler"),
  };
}
