/** Minimal RFC-4180 CSV reader: comma delimiter, double-quote quoting with
 *  doubled quotes as escapes, LF or CRLF line ends. */

export function parseCsv(text: string): string[][] {
  const rows: string[][] = [];
  let row: string[] = [];
  let field = "";
  let quoted = false;
  let sawAny = false;
  let i = 0;
  while (i < text.length) {
    const ch = text[i];
    if (quoted) {
      if (ch === '"') {
        if (text[i + 1] === '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
        i += 1;
        continue;
      }
      field += ch;
      i += 1;
      continue;
    }
    if (ch === '"' && field === "") {
      quoted = true;
      sawAny = true;
      i += 1;
      continue;
    }
    if (ch === ",") {
      row.push(field);
      field = "";
      sawAny = true;
      i += 1;
      continue;
    }
    if (ch === "\n" || ch === "\r") {
      if (ch === "\r" && text[i + 1] === "\n") i += 1;
      row.push(field);
      rows.push(row);
      row = [];
      field = "";
      sawAny = false;
      i += 1;
      continue;
    }
    field += ch;
    sawAny = true;
    i += 1;
  }
  if (field !== "" || row.length > 0 || sawAny) {
    row.push(field);
    rows.push(row);
  }
  return rows;
}
