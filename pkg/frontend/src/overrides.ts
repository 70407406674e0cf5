// Freeze strings mirror the backend's `param:value,param2:value2` form.
// Validating locally lets the UI flag typos before any request is sent.

const NAME_PATTERN = /^[A-Za-z_][A-Za-z0-9_]*$/;

export interface OverrideParse {
  ok: boolean;
  overrides: Record<string, string>;
  error?: string;
}

export function parseOverrideString(raw: string): OverrideParse {
  const overrides: Record<string, string> = {};
  const trimmed = raw.trim();
  if (trimmed === "") {
    return { ok: true, overrides };
  }
  for (const piece of trimmed.split(",")) {
    const colon = piece.indexOf(":");
    if (colon < 0) {
      return { ok: false, overrides: {}, error: `missing ':' in "${piece}"` };
    }
    const name = piece.slice(0, colon).trim();
    const value = piece.slice(colon + 1).trim();
    if (!NAME_PATTERN.test(name)) {
      return { ok: false, overrides: {}, error: `bad parameter name "${name}"` };
    }
    if (value === "") {
      return { ok: false, overrides: {}, error: `empty value for "${name}"` };
    }
    overrides[name] = value;
  }
  return { ok: true, overrides };
}

export function formatOverrideString(overrides: Record<string, string>): string {
  return Object.keys(overrides)
    .sort()
    .map((name) => `${name}:${overrides[name]}`)
    .join(",");
}
