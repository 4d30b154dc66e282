/** Test scaffolding: response fixtures captured from the real served
 * snapshot (scripts/capture_frontend_fixtures.py) and a routing fetch
 * mock that replays them byte-for-byte. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixtureText(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

export function fixtureJson<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

export const manifest = fixtureJson<{
  period: string;
  country: string;
  add_product: string;
  remove_top_product: string;
  content_digest: string;
}>("manifest.json");

type RouteHandler = (init?: RequestInit) =>
  | { status?: number; body: string }
  | Promise<{ status?: number; body: string }>;

interface Route {
  method: string;
  prefix: string;
  handler: RouteHandler;
}

export class MockService {
  readonly base = "http://svc";
  readonly calls: { method: string; url: string; body?: string }[] = [];
  private routes: Route[] = [];
  failing = false;

  on(method: string, prefix: string, handler: RouteHandler): void {
    this.routes.push({ method: method.toUpperCase(), prefix, handler });
  }

  onFixture(method: string, prefix: string, name: string): void {
    this.on(method, prefix, () => ({ body: fixtureText(name) }));
  }

  fetch = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    const method = (init?.method ?? "GET").toUpperCase();
    this.calls.push({
      method,
      url,
      body: typeof init?.body === "string" ? init.body : undefined,
    });
    if (this.failing) {
      throw new TypeError("network down");
    }
    const path = url.slice(this.base.length);
    const route = this.routes.find(
      (r) => r.method === method && path.startsWith(r.prefix),
    );
    if (!route) {
      return new Response(
        JSON.stringify({
          error: { code: "not_found", message: `no route for ${path}`, details: {} },
        }),
        { status: 404, headers: { "Content-Type": "application/json" } },
      );
    }
    const out = await route.handler(init);
    return new Response(out.body, {
      status: out.status ?? 200,
      headers: { "Content-Type": "application/json" },
    });
  };

  callsTo(prefix: string): number {
    return this.calls.filter((c) =>
      c.url.slice(this.base.length).startsWith(prefix),
    ).length;
  }
}

/** Standard happy-path routing of all captured fixtures. */
export function standardService(): MockService {
  const svc = new MockService();
  svc.onFixture("GET", "/periods", "periods.json");
  svc.onFixture("GET", "/rankings", "rankings.json");
  svc.onFixture("GET", "/productspace", "productspace.json");
  svc.onFixture("GET", `/country/${manifest.country}`, "country.json");
  svc.on("POST", "/whatif", (init) => {
    const body = JSON.parse(String(init?.body ?? "{}"));
    const add: string[] = body.add ?? [];
    const remove: string[] = body.remove ?? [];
    if (add.length === 0 && remove.length === 0) {
      return { body: fixtureText("whatif_empty.json") };
    }
    if (
      add.length === 1 &&
      add[0] === manifest.add_product &&
      remove.length === 0
    ) {
      return { body: fixtureText("whatif_add.json") };
    }
    if (
      remove.length === 1 &&
      remove[0] === manifest.remove_top_product &&
      add.length === 0
    ) {
      return { body: fixtureText("whatif_remove_top.json") };
    }
    return {
      status: 400,
      body: JSON.stringify({
        error: {
          code: "validation_error",
          message: `no fixture for add=${add} remove=${remove}`,
          details: {},
        },
      }),
    };
  });
  return svc;
}

export function explorerElements() {
  document.body.innerHTML =
    '<div id="graph"></div><div id="sidebar"></div>' +
    '<div id="panel"></div><div id="status"></div>';
  return {
    graph: document.getElementById("graph") as HTMLElement,
    sidebar: document.getElementById("sidebar") as HTMLElement,
    panel: document.getElementById("panel") as HTMLElement,
    status: document.getElementById("status") as HTMLElement,
  };
}
