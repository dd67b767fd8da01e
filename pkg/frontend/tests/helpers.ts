import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));

export interface Fixture {
  path: string;
  request: unknown;
  status: number;
  /** Exact bytes the live service produced for `request`. */
  body_text: string;
}

export function loadFixture(name: string): Fixture {
  return JSON.parse(
    readFileSync(join(here, "fixtures", `${name}.json`), "utf8"),
  ) as Fixture;
}

export interface RecordingFetch {
  fetch: (url: string, init?: RequestInit) => Promise<Response>;
  /** Parsed request bodies, in call order. */
  sentBodies: unknown[];
}

/** Serve each fixture by path suffix, recording what the client sent. */
export function fixtureFetch(...fixtures: Fixture[]): RecordingFetch {
  const sentBodies: unknown[] = [];
  return {
    sentBodies,
    fetch: (url, init) => {
      sentBodies.push(init?.body ? JSON.parse(init.body as string) : null);
      const match = fixtures.find((f) => url.endsWith(f.path));
      if (!match) return Promise.reject(new Error(`no fixture for ${url}`));
      return Promise.resolve(
        new Response(match.body_text, {
          status: match.status,
          headers: { "content-type": "application/json" },
        }),
      );
    },
  };
}
