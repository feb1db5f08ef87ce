// End-to-end UI flow against a real service instance: registration, then a
// failed login whose placements survive into the successful retry. Runs the
// production DOM code inside jsdom and spawns the actual Python service.

import { afterAll, afterEach, beforeAll, describe, expect, it, vi } from "vitest";
import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import net from "node:net";
import os from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";

import type { ServiceInfo, WirePlacement } from "../src/api.js";
import { createApp } from "../src/main.js";
import {
	emptyPlacements,
	placeElement,
	validatePlacements,
} from "../src/state.js";
import type { Placements } from "../src/state.js";

const REPO_ROOT = path.resolve(path.dirname(fileURLToPath(import.meta.url)), "..", "..");

let service: ChildProcess | null = null;
let base = "";

function freePort(): Promise<number> {
	return new Promise((resolve, reject) => {
		const server = net.createServer();
		server.listen(0, "127.0.0.1", () => {
			const address = server.address();
			if (address && typeof address === "object") {
				const port = address.port;
				server.close(() => resolve(port));
			} else {
				reject(new Error("no port assigned"));
			}
		});
	});
}

async function until(
	check: () => boolean | Promise<boolean>,
	timeoutMs = 30_000,
	what = "condition",
): Promise<void> {
	const deadline = Date.now() + timeoutMs;
	while (Date.now() < deadline) {
		if (await check()) {
			return;
		}
		await new Promise((resolve) => setTimeout(resolve, 50));
	}
	throw new Error(`timed out waiting for ${what}`);
}

beforeAll(async () => {
	const workdir = mkdtempSync(path.join(os.tmpdir(), "gridpass-ui-"));
	const policy = JSON.parse(
		readFileSync(path.join(REPO_ROOT, "policies", "prototype.json"), "utf8"),
	);
	policy.hash_params = { name: "scrypt", n: 2, r: 8, p: 1, dklen: 32 };
	const policyPath = path.join(workdir, "policy.json");
	writeFileSync(policyPath, JSON.stringify(policy));

	const port = await freePort();
	const configPath = path.join(workdir, "service.json");
	writeFileSync(
		configPath,
		JSON.stringify({
			policy_path: policyPath,
			data_dir: path.join(workdir, "data"),
			bind: "127.0.0.1",
			port,
			admin_token: "ui-admin",
		}),
	);

	service = spawn("python3", ["-m", "gridpass.cli", "serve", "--config", configPath], {
		cwd: REPO_ROOT,
		stdio: "ignore",
	});
	base = `http://127.0.0.1:${port}`;
	await until(
		async () => {
			try {
				const response = await fetch(`${base}/api/config`);
				return response.ok;
			} catch {
				return false;
			}
		},
		60_000,
		"service startup",
	);
});

afterAll(() => {
	service?.kill();
});

function clickTile(root: HTMLElement, setId: string, elementId: string): void {
	const tile = root.querySelector<HTMLButtonElement>(
		`.tile[data-set-id="${setId}"][data-element-id="${elementId}"]`,
	);
	expect(tile, `tile ${setId}:${elementId}`).toBeTruthy();
	tile?.click();
}

function clickCell(root: HTMLElement, cell: number): void {
	const button = root.querySelector<HTMLButtonElement>(`.cell[data-cell="${cell}"]`);
	expect(button, `cell ${cell}`).toBeTruthy();
	button?.click();
}

function occupiedCells(root: HTMLElement): Array<[number, string]> {
	return [...root.querySelectorAll<HTMLButtonElement>(".cell.occupied")].map((el) => [
		Number(el.dataset.cell),
		`${el.dataset.setId}:${el.dataset.elementId}`,
	]);
}

function feedbackTone(root: HTMLElement): string {
	return root.querySelector<HTMLElement>(".feedback")?.dataset.tone ?? "";
}

function feedbackText(root: HTMLElement): string {
	return root.querySelector<HTMLElement>(".feedback")?.textContent ?? "";
}

function paletteFingerprint(root: HTMLElement): string {
	return [...root.querySelectorAll<HTMLElement>('.palette[data-set-id="colors"] .tile')]
		.map((tile) => tile.dataset.elementId)
		.join(",");
}

function setUsername(root: HTMLElement, value: string): void {
	const input = root.querySelector<HTMLInputElement>(".username");
	expect(input).toBeTruthy();
	input!.value = value;
}

const USERNAME = `web-${Date.now()}`;

describe("registration and login through the DOM", () => {
	it("registers a configuration", async () => {
		const root = document.createElement("div");
		document.body.appendChild(root);
		createApp(root, base);

		setUsername(root, USERNAME);
		root.querySelector<HTMLButtonElement>(".load")!.click();
		await until(() => root.querySelectorAll(".palette").length === 3, 15_000, "palettes");

		// Submit must stay disabled until the configuration is locally valid.
		const submit = root.querySelector<HTMLButtonElement>(".submit")!;
		expect(submit.disabled).toBe(true);

		clickTile(root, "colors", "black");
		clickCell(root, 0);
		clickTile(root, "icons", "fire");
		clickCell(root, 5);
		clickTile(root, "shapes", "square");
		clickCell(root, 10);

		await until(() => !submit.disabled, 5_000, "submit enabled");
		submit.click();
		await until(() => feedbackTone(root) === "success", 15_000, "registration feedback");
		expect(feedbackText(root)).toContain("Registered");
		root.remove();
	});

	it("keeps placements across a failed login, then succeeds after the fix", async () => {
		const root = document.createElement("div");
		document.body.appendChild(root);
		createApp(root, base);

		root.querySelector<HTMLButtonElement>('.mode-tab[data-mode="login"]')!.click();
		setUsername(root, USERNAME);
		root.querySelector<HTMLButtonElement>(".load")!.click();
		await until(() => root.querySelectorAll(".palette").length === 3, 15_000, "palettes");
		const orderBeforeFailure = paletteFingerprint(root);

		// Black on the wrong cell; icon and shape correct.
		clickTile(root, "colors", "black");
		clickCell(root, 1);
		clickTile(root, "icons", "fire");
		clickCell(root, 5);
		clickTile(root, "shapes", "square");
		clickCell(root, 10);

		const submit = root.querySelector<HTMLButtonElement>(".submit")!;
		await until(() => !submit.disabled, 5_000, "submit enabled");
		submit.click();
		await until(() => feedbackTone(root) === "failure", 15_000, "failure feedback");

		// The grid still shows everything that was entered...
		expect(new Map(occupiedCells(root))).toEqual(
			new Map([
				[1, "colors:black"],
				[5, "icons:fire"],
				[10, "shapes:square"],
			]),
		);
		// ...while the palettes arrived in a fresh order with the new challenge.
		await until(
			() => paletteFingerprint(root) !== orderBeforeFailure,
			15_000,
			"reshuffled palettes",
		);

		// Fix the mistake: move black from cell 1 to cell 0.
		clickTile(root, "colors", "black");
		clickCell(root, 0);
		clickTile(root, "colors", "black"); // deselect
		clickCell(root, 1); // bare tap removes
		await until(() => !submit.disabled, 5_000, "submit re-enabled");
		submit.click();
		await until(() => feedbackTone(root) === "success", 15_000, "login success");
		expect(feedbackText(root)).toContain("Login successful");
		root.remove();
	});
});

describe("token and wire-format behavior", () => {
	afterEach(() => {
		vi.restoreAllMocks();
	});

	it("recovers from a stale token by refreshing silently, keeping placements", async () => {
		const username = `web-retry-${Date.now()}`;
		const root = document.createElement("div");
		document.body.appendChild(root);
		createApp(root, base);

		// Register first (directly against the API).
		const placements: WirePlacement[] = [
			{ cell: 0, set_id: "colors", element_id: "black" },
			{ cell: 5, set_id: "icons", element_id: "fire" },
			{ cell: 10, set_id: "shapes", element_id: "square" },
		];
		const created = await fetch(`${base}/api/register`, {
			method: "POST",
			headers: { "Content-Type": "application/json" },
			body: JSON.stringify({ username, placements }),
		});
		expect(created.status).toBe(201);

		root.querySelector<HTMLButtonElement>('.mode-tab[data-mode="login"]')!.click();
		setUsername(root, username);
		root.querySelector<HTMLButtonElement>(".load")!.click();
		await until(() => root.querySelectorAll(".palette").length === 3, 15_000, "palettes");

		clickTile(root, "colors", "black");
		clickCell(root, 0);
		clickTile(root, "icons", "fire");
		clickCell(root, 5);
		clickTile(root, "shapes", "square");
		clickCell(root, 10);

		// Force the first login attempt to hit the expired/stale-token path
		// and capture every login body the client sends.
		const realFetch = globalThis.fetch;
		const loginBodies: Array<Record<string, unknown>> = [];
		let failedOnce = false;
		vi.spyOn(globalThis, "fetch").mockImplementation(async (input, init) => {
			const url = String(input);
			if (url.endsWith("/api/login") && init?.body) {
				loginBodies.push(JSON.parse(String(init.body)));
				if (!failedOnce) {
					failedOnce = true;
					return new Response(JSON.stringify({ error: "invalid_token" }), {
						status: 400,
						headers: { "Content-Type": "application/json" },
					});
				}
			}
			return realFetch(input, init);
		});

		const submit = root.querySelector<HTMLButtonElement>(".submit")!;
		await until(() => !submit.disabled, 5_000, "submit enabled");
		submit.click();
		await until(() => feedbackTone(root) === "success", 15_000, "silent retry success");

		expect(loginBodies).toHaveLength(2);
		const [first, second] = loginBodies;
		// A fresh token was fetched; placements were preserved verbatim.
		expect(second!.token).not.toBe(first!.token);
		expect(second!.placements).toEqual(first!.placements);
		// Only username/token/placements/timing go over the wire: no palette order.
		expect(Object.keys(second!).sort()).toEqual([
			"client_duration_seconds",
			"placements",
			"token",
			"username",
		]);
		expect(second!.client_duration_seconds as number).toBeGreaterThanOrEqual(0);
		root.remove();
	});

	it("local validation mirror matches server shape validation", async () => {
		const info: ServiceInfo = await (await fetch(`${base}/api/config`)).json();
		const rules = {
			rows: info.grid.rows,
			cols: info.grid.cols,
			kMin: info.k_min,
			kMax: info.k_max,
			setIds: info.sets.map((s) => s.set_id),
		};
		const pool = info.sets.flatMap((s) =>
			s.elements.map((e) => ({ setId: s.set_id, elementId: e.element_id })),
		);

		// Deterministic pseudo-random placement maps, plus crafted cases so
		// both verdicts are guaranteed to occur.
		let seed = 42;
		const rand = (bound: number) => {
			seed = (seed * 48271) % 2147483647;
			return seed % bound;
		};
		const cases: Placements[] = [];
		for (let trial = 0; trial < 40; trial += 1) {
			let placements: Placements = emptyPlacements();
			const k = rand(6); // 0..5 placements: often under-covered or too few
			for (let i = 0; i < k; i += 1) {
				placements = placeElement(placements, rand(info.grid_cells), pool[rand(pool.length)]!);
			}
			cases.push(placements);
		}
		let covering: Placements = emptyPlacements();
		info.sets.forEach((s, index) => {
			covering = placeElement(covering, index, {
				setId: s.set_id,
				elementId: s.elements[0]!.element_id,
			});
		});
		cases.push(covering); // valid by construction
		cases.push(placeElement(emptyPlacements(), 0, pool[0]!)); // under-covered

		let sawValid = false;
		let sawInvalid = false;
		for (const [trial, placements] of cases.entries()) {
			const local = validatePlacements(placements, rules);
			const body = {
				username: `mirror-${Date.now()}-${trial}`,
				placements: [...placements.entries()].map(([cell, sel]) => ({
					cell,
					set_id: sel.setId,
					element_id: sel.elementId,
				})),
			};
			const response = await fetch(`${base}/api/register`, {
				method: "POST",
				headers: { "Content-Type": "application/json" },
				body: JSON.stringify(body),
			});
			if (local.ok) {
				sawValid = true;
				expect(response.status, JSON.stringify(body)).toBe(201);
			} else {
				sawInvalid = true;
				expect(response.status, JSON.stringify(body)).toBe(400);
			}
		}
		expect(sawValid).toBe(true);
		expect(sawInvalid).toBe(true);
	});
});
